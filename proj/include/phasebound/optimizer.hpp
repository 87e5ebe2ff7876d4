#pragma once

// Searches over one-parameter sigma families for the largest lower bound
// and the smallest upper bound on Z at fixed beta.

#include <string>
#include <vector>

#include "phasebound/bounds.hpp"

namespace phasebound {

class SigmaFamily {
 public:
  enum class Kind { fock, two_point, squeezed };

  /// |m><m| for integer m in [m_min, m_max].
  static SigmaFamily fock(unsigned m_min, unsigned m_max, std::size_t dim);
  /// t |m1><m1| + (1 - t) |m2><m2| for t in [t_min, t_max].
  static SigmaFamily two_point(unsigned m1, unsigned m2, std::size_t dim, double t_min = 0.0,
                               double t_max = 1.0);
  /// Squeezed vacuum |0; w> for w in [w_min, w_max].
  static SigmaFamily squeezed(double w_min, double w_max, std::size_t dim);

  Kind kind() const { return kind_; }
  bool discrete() const { return kind_ == Kind::fock; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t dim() const { return dim_; }
  /// Name of the parameter in reports: m, t or omega.
  std::string parameter_name() const;
  std::string describe() const;

  SigmaState member(double parameter) const;

 private:
  Kind kind_ = Kind::fock;
  double lo_ = 0.0;
  double hi_ = 0.0;
  unsigned m1_ = 0;
  unsigned m2_ = 0;
  std::size_t dim_ = 0;
};

enum class Direction { maximize_lower, minimize_upper };

struct TracePoint {
  double parameter;
  double log_bound;
};

/// The objective is ln(bound) so that large beta does not overflow.
struct OptimizationReport {
  Direction direction;
  double best_parameter;
  double best_log_bound;
  std::size_t evaluations;
  std::vector<TracePoint> trace;  // ordered by parameter
  std::string best_sigma;
};

struct OptimizerConfig {
  std::size_t grid_points = 33;
  double parameter_tol = 1e-4;
};

/// ln of the lower (or upper) bound for one family member.
double bound_objective(const HamiltonianSpec& h, const SigmaState& sigma, Direction direction,
                       double beta, const QuadratureConfig& quad);

OptimizationReport optimize_lower(const HamiltonianSpec& h, const SigmaFamily& family,
                                  double beta, const QuadratureConfig& quad,
                                  const OptimizerConfig& cfg = {});
OptimizationReport optimize_upper(const HamiltonianSpec& h, const SigmaFamily& family,
                                  double beta, const QuadratureConfig& quad,
                                  const OptimizerConfig& cfg = {});

}  // namespace phasebound
