#pragma once

// Run configuration for the command line: a flat key=value map assembled
// from an optional file and then overridden by flags.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/optimizer.hpp"

namespace phasebound::cli {

// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Every key the configuration understands, with its default ("" = unset).
const std::vector<std::pair<std::string, std::string>>& known_keys();

/// Parse "key = value" lines; '#' starts a comment. Unknown keys are errors.
KeyValues parse_key_values(const std::string& text, const std::string& origin);
KeyValues read_key_value_file(const std::string& path);

double parse_double(const std::string& text, const std::string& what);
long parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

/// harmonic[:omega] | kerr:a,b | anharmonic:lambda | numberpoly:c0[,c1[,c2]]
HamiltonianSpec parse_hamiltonian(const std::string& text);
/// fock:m | diag:c0,c1,... | squeezed:omega
SigmaState parse_sigma(const std::string& text, std::size_t dim);
/// fock:a..b | mix:m1,m2[:t0..t1] | squeezed:w0..w1
SigmaFamily parse_family(const std::string& text, std::size_t dim);

struct RunConfig {
  std::optional<HamiltonianSpec> hamiltonian;
  std::string sigma_lower = "fock:0";
  std::string sigma_upper = "fock:0";
  std::vector<double> betas;
  std::size_t dim = 128;
  std::string output;
  std::string trace;
  std::string family;
  std::string direction = "lower";
  std::size_t count = 10;
  std::size_t points = 5;
  double extent = 2.0;
  QuadratureConfig quad;

  /// Validates and converts; throws ConfigError.
  static RunConfig from(const KeyValues& kv);
  const HamiltonianSpec& require_hamiltonian() const;
};

}  // namespace phasebound::cli
