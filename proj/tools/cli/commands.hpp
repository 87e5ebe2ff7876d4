#pragma once

#include <exception>
#include <ostream>
#include <string>

#include "config.hpp"

namespace phasebound::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kSandwichViolation = 4,
  kReproduceFailed = 5,
};

/// Named pass/fail checks of a reproduce preset, one stderr line each.
class CheckLog {
 public:
  explicit CheckLog(std::ostream& err) : err_(err) {}
  void operator()(const std::string& name, bool ok, const std::string& detail);
  const std::string& first_failure() const { return first_failure_; }
  /// kOk when every check passed, kReproduceFailed otherwise.
  int exit_code() const { return first_failure_.empty() ? kOk : kReproduceFailed; }

 private:
  std::ostream& err_;
  std::string first_failure_;
};

/// Exit code for an exception escaping a command; prints the reason.
int exit_code_for(std::exception_ptr error, std::ostream& err);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_symbols(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Fixed presets for the harmonic, kerr and anharmonic examples. `cfg`
/// only supplies output paths and quadrature settings.
int cmd_reproduce(const std::string& name, const RunConfig& cfg, std::ostream& out,
                  std::ostream& err);

/// Runs one command, mapping exceptions to exit codes.
int run(const std::string& command, const KeyValues& kv, const std::string& argument,
        std::ostream& out, std::ostream& err);

}  // namespace phasebound::cli
