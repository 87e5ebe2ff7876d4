#include "phasebound/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phasebound {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

OptimizationReport optimize(const HamiltonianSpec& h, const SigmaFamily& family, double beta,
                            const QuadratureConfig& quad, const OptimizerConfig& cfg,
                            Direction dir) {
  if (cfg.grid_points < 2 || !(cfg.parameter_tol > 0.0)) {
    throw DomainError("optimizer needs at least 2 grid points and a positive tolerance");
  }
  if (dir == Direction::minimize_upper && family.kind() == SigmaFamily::Kind::squeezed &&
      !(family.lo() == 1.0 && family.hi() == 1.0)) {
    throw UnsupportedError("upper symbols need sigma = sigma(N); the squeezed family is not");
  }
  const double sign = dir == Direction::maximize_lower ? 1.0 : -1.0;
  OptimizationReport rep{dir, 0.0, 0.0, 0, {}, {}};

  auto eval = [&](double x) {
    const double v = bound_objective(h, family.member(x), dir, beta, quad);
    rep.trace.push_back({x, v});
    ++rep.evaluations;
    return v;
  };
  // Strict improvement only, so ties keep the smaller parameter when the
  // candidates are visited in ascending order.
  auto better = [&](double a, double b) { return sign * a > sign * b; };

  std::vector<double> grid;
  if (family.discrete()) {
    for (double m = family.lo(); m <= family.hi(); m += 1.0) grid.push_back(m);
  } else if (family.lo() == family.hi()) {
    grid.push_back(family.lo());
  } else {
    for (std::size_t i = 0; i < cfg.grid_points; ++i) {
      grid.push_back(family.lo() + (family.hi() - family.lo()) * static_cast<double>(i) /
                                       static_cast<double>(cfg.grid_points - 1));
    }
  }
  std::vector<double> values;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values.push_back(eval(grid[i]));
    if (i == 0 || better(values[i], values[best])) best = i;
  }
  rep.best_parameter = grid[best];
  rep.best_log_bound = values[best];

  if (!family.discrete() && grid.size() > 1) {
    // Golden-section search in the bracket around the best grid point.
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > cfg.parameter_tol) {
      if (better(f2, f1)) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = eval(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = eval(x1);
      }
    }
    for (const auto& t : rep.trace) {
      if (better(t.log_bound, rep.best_log_bound) ||
          (t.log_bound == rep.best_log_bound && t.parameter < rep.best_parameter)) {
        rep.best_parameter = t.parameter;
        rep.best_log_bound = t.log_bound;
      }
    }
  }
  std::stable_sort(rep.trace.begin(), rep.trace.end(),
                   [](const TracePoint& x, const TracePoint& y) { return x.parameter < y.parameter; });
  rep.best_sigma = family.member(rep.best_parameter).describe();
  return rep;
}

}  // namespace

SigmaFamily SigmaFamily::fock(unsigned m_min, unsigned m_max, std::size_t dim) {
  if (m_min > m_max) throw DomainError("fock family: empty range");
  if (m_max >= dim) throw DimensionError("fock family: m_max must be below dim");
  SigmaFamily f;
  f.kind_ = Kind::fock;
  f.lo_ = m_min;
  f.hi_ = m_max;
  f.dim_ = dim;
  return f;
}

SigmaFamily SigmaFamily::two_point(unsigned m1, unsigned m2, std::size_t dim, double t_min,
                                   double t_max) {
  if (!(t_min >= 0.0) || !(t_max <= 1.0) || !(t_min <= t_max)) {
    throw DomainError("two-point family: need 0 <= t_min <= t_max <= 1");
  }
  if (m1 == m2) throw DomainError("two-point family: the two levels must differ");
  if (std::max(m1, m2) >= dim) throw DimensionError("two-point family: level beyond dim");
  SigmaFamily f;
  f.kind_ = Kind::two_point;
  f.lo_ = t_min;
  f.hi_ = t_max;
  f.m1_ = m1;
  f.m2_ = m2;
  f.dim_ = dim;
  return f;
}

SigmaFamily SigmaFamily::squeezed(double w_min, double w_max, std::size_t dim) {
  if (!(w_min > 0.0) || !(w_max >= w_min) || !std::isfinite(w_max)) {
    throw DomainError("squeezed family: need 0 < omega_min <= omega_max");
  }
  SigmaFamily f;
  f.kind_ = Kind::squeezed;
  f.lo_ = w_min;
  f.hi_ = w_max;
  f.dim_ = dim;
  return f;
}

std::string SigmaFamily::parameter_name() const {
  switch (kind_) {
    case Kind::fock:
      return "m";
    case Kind::two_point:
      return "t";
    case Kind::squeezed:
      return "omega";
  }
  return "x";
}

std::string SigmaFamily::describe() const {
  switch (kind_) {
    case Kind::fock:
      return "fock:" + fmt(lo_) + ".." + fmt(hi_);
    case Kind::two_point:
      return "mix:" + std::to_string(m1_) + "," + std::to_string(m2_) + ":" + fmt(lo_) + ".." +
             fmt(hi_);
    case Kind::squeezed:
      return "squeezed:" + fmt(lo_) + ".." + fmt(hi_);
  }
  return "";
}

SigmaState SigmaFamily::member(double x) const {
  switch (kind_) {
    case Kind::fock:
      return SigmaState::fock_projector(static_cast<std::size_t>(std::lround(x)), dim_);
    case Kind::two_point: {
      std::vector<double> w(std::max(m1_, m2_) + 1, 0.0);
      w[m1_] = x;
      w[m2_] = 1.0 - x;
      return SigmaState::from_diagonal(w, dim_);
    }
    case Kind::squeezed:
      return SigmaState::squeezed_vacuum(x, dim_);
  }
  throw UnsupportedError("unknown family");
}

double bound_objective(const HamiltonianSpec& h, const SigmaState& sigma, Direction direction,
                       double beta, const QuadratureConfig& quad) {
  if (direction == Direction::maximize_lower) {
    return phase_space_integral(lower_symbol_closed(h, moments(sigma)), beta, quad).log_value;
  }
  if (!sigma.is_number_diagonal()) {
    throw UnsupportedError("upper symbols need sigma = sigma(N), got " + sigma.describe());
  }
  return phase_space_integral(upper_symbol(h, upper_coefficients(sigma.nbar(), sigma.n2bar())),
                              beta, quad)
      .log_value;
}

OptimizationReport optimize_lower(const HamiltonianSpec& h, const SigmaFamily& family,
                                  double beta, const QuadratureConfig& quad,
                                  const OptimizerConfig& cfg) {
  return optimize(h, family, beta, quad, cfg, Direction::maximize_lower);
}

OptimizationReport optimize_upper(const HamiltonianSpec& h, const SigmaFamily& family,
                                  double beta, const QuadratureConfig& quad,
                                  const OptimizerConfig& cfg) {
  return optimize(h, family, beta, quad, cfg, Direction::minimize_upper);
}

}  // namespace phasebound
