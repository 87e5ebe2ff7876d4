#pragma once

// Partition-function sandwich
//   int exp(-beta H_sigma') dp dq/2pi  <=  Tr exp(-beta H)  <=  int exp(-beta H_{-sigma}) dp dq/2pi
// with the exact middle from the truncated spectrum, plus free-energy and
// ground-state-energy bounds and classical references.

#include <optional>
#include <string>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/operators.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/sigma.hpp"
#include "phasebound/symbols.hpp"

namespace phasebound {

/// Spectral sum over the trusted block with a tail certificate.
struct ExactPartition {
  double log_value;
  double tail_ratio;  // exp(-beta mu_T) relative to the partial sum
  std::size_t terms;
  double value() const { return std::exp(log_value); }
};

/// Tr exp(-beta H) from the lowest dim/2 eigenvalues. Throws
/// TruncationError when exp(-beta mu_{dim/2}) is not below 1e-12 of the sum.
ExactPartition z_exact(const HermitianOperator& h, double beta);
/// Same, from eigenvalues (ascending) already restricted to the trusted block
/// plus the first excluded level used for the certificate.
ExactPartition z_exact_from_levels(const std::vector<double>& trusted, double next_level,
                                   double beta);

/// Lowest trusted_block(dim) eigenvalues of H and the next one.
struct TrustedSpectrum {
  std::vector<double> levels;
  double next_level;
};
TrustedSpectrum trusted_spectrum(const HamiltonianSpec& h, std::size_t dim);

/// log of int exp(-beta * symbol(p,q)) dp dq / 2pi. Radial symbols reduce to
/// (1/2) int_0^inf exp(-beta poly(s)) ds; polynomials without p-q cross terms
/// factorise into two line integrals (quadratic factors in closed form);
/// anything else is integrated as nested line integrals.
LogIntegral phase_space_integral(const PhaseSymbol& symbol, double beta,
                                 const QuadratureConfig& quad);
/// Always nested line integrals, whatever the form of the symbol.
LogIntegral phase_space_integral_2d(const PhaseSymbol& symbol, double beta,
                                    const QuadratureConfig& quad);

/// Minimum of a radial or separable polynomial symbol (nullopt otherwise).
std::optional<double> symbol_minimum(const PhaseSymbol& symbol);

struct BoundResult {
  double beta = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  std::optional<double> z_exact;
  std::string z_exact_note;  // why z_exact is missing
  double f_lower = 0.0;      // -ln(upper)/beta
  double f_upper = 0.0;      // -ln(lower)/beta
  double quad_error = 0.0;   // relative, both integrals combined
  std::optional<double> z_classical;
  std::string sigma_lower_desc;
  std::string sigma_upper_desc;
};

/// Raised by bound_pair; carries the offending record.
class SandwichFailure : public SandwichViolation {
 public:
  SandwichFailure(const std::string& what, BoundResult r)
      : SandwichViolation(what), result(std::move(r)) {}
  BoundResult result;
};

/// Both bounds at one beta. sigma_lower may be any state; sigma_upper must be
/// a function of N. The exact value uses a spectrum at dimension `dim`.
BoundResult bound_pair(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                       const SigmaState& sigma_upper, double beta, const QuadratureConfig& quad,
                       std::size_t dim);

struct BetaGrid {
  std::vector<double> values;
  explicit BetaGrid(std::vector<double> v);
  static BetaGrid log_spaced(double lo, double hi, std::size_t steps);
};

struct SweepPoint {
  double beta;
  std::optional<BoundResult> result;
  std::string error;
};

std::vector<SweepPoint> sweep(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                              const SigmaState& sigma_upper, const BetaGrid& grid,
                              const QuadratureConfig& quad, std::size_t dim);

/// Ground-state energy brackets from the bounds at a large probe beta.
///
/// Z <= U gives E0 >= -ln(U)/beta at every beta. L <= Z only gives
/// F(beta) <= -ln(L)/beta, and F <= E0, so an upper bound on E0 needs the
/// spectral slack ln(sum_r exp(-beta (mu_r - mu_0)))/beta as well.
struct EnergyBounds {
  double beta;
  double e0_lower;             // -ln(upper)/beta
  double e0_upper_raw;         // -ln(lower)/beta, the free-energy bound
  double slack;                // ln D / beta from the exact spectrum
  double e0_upper;             // e0_upper_raw + slack
  std::optional<double> limit_upper;  // min of the lower symbol (beta -> inf)
  std::optional<double> limit_lower;  // min of the upper symbol (beta -> inf)
  double gap;
  double exact_e0;
};

EnergyBounds energy_bounds(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                           const SigmaState& sigma_upper, double beta_probe,
                           const QuadratureConfig& quad, std::size_t dim);

/// H_cl(p,q) as a symbol (radial for number polynomials).
PhaseSymbol classical_symbol(const HamiltonianSpec& h);

/// Z_cl / 2pi = int exp(-beta H_cl) dp dq / 2pi. Closed forms for the
/// harmonic and anharmonic families, radial quadrature otherwise.
double classical_partition(const HamiltonianSpec& h, double beta, const QuadratureConfig& quad);

/// Modified Bessel function K_nu(x) from int_0^inf exp(-x cosh t) cosh(nu t) dt.
double bessel_k(double nu, double x);
/// exp(x) K_nu(x), safe for large x.
double bessel_k_scaled(double nu, double x);

}  // namespace phasebound
