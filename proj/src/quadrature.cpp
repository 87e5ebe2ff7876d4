#include "phasebound/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Dense>

namespace phasebound {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Extra room below the tail cut so the cutoff itself is never resolved.
constexpr double kCutMargin = 5.0;

std::vector<double> trimmed(std::span<const double> c) {
  std::vector<double> out(c.begin(), c.end());
  while (!out.empty() && out.back() == 0.0) out.pop_back();
  return out;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

// Walk outward from `start` in `direction` until g(x) exceeds `level`, then
// bisect. g must be increasing along the walk.
double crossing(const std::function<double(double)>& g, double start, double direction,
                double level) {
  double step = 1.0;
  double inner = start;
  double outer = start + direction * step;
  int guard = 0;
  while (g(outer) < level) {
    inner = outer;
    step *= 2.0;
    outer = start + direction * step;
    if (++guard > 200) throw ConvergenceError("integration cutoff not found");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (inner + outer);
    (g(mid) < level ? inner : outer) = mid;
  }
  return outer;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(tail_eps > 0.0) || tail_eps >= 1.0) throw DomainError("tail_eps must lie in (0, 1)");
  if (radial_nodes < 16 || cartesian_nodes_per_axis < 16) {
    throw DomainError("quadrature node counts must be at least 16");
  }
  if (!(grid_doubling_tol > 0.0)) throw DomainError("grid_doubling_tol must be positive");
}

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  slot = std::move(rule);
  return *slot;
}

double log_sum_exp(std::span<const double> logs, std::span<const double> weights) {
  double top = kNegInf;
  for (double l : logs) top = std::max(top, l);
  if (top == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) sum += weights[k] * std::exp(logs[k] - top);
  return top + std::log(sum);
}

LogIntegral log_integrate_interval(const std::function<double(double)>& logf, double a,
                                   double b, std::size_t panels, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(b > a)) throw DomainError("integration interval is empty");
  const auto& rule = gauss_legendre(cfg.radial_nodes);
  auto estimate = [&](std::size_t np) {
    std::vector<double> logs;
    std::vector<double> weights;
    logs.reserve(np * rule.nodes.size());
    weights.reserve(np * rule.nodes.size());
    const double h = (b - a) / static_cast<double>(np);
    for (std::size_t panel = 0; panel < np; ++panel) {
      const double lo = a + h * static_cast<double>(panel);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        logs.push_back(logf(lo + 0.5 * h * (rule.nodes[i] + 1.0)));
        weights.push_back(0.5 * h * rule.weights[i]);
      }
    }
    return log_sum_exp(logs, weights);
  };
  panels = std::max<std::size_t>(panels, 1);
  double prev = estimate(panels);
  for (std::size_t d = 0; d < cfg.max_doublings; ++d) {
    panels *= 2;
    const double cur = estimate(panels);
    if (cur == kNegInf && prev == kNegInf) return {kNegInf, 0.0};
    const double rel = std::abs(std::expm1(cur - prev));
    if (rel < cfg.grid_doubling_tol) return {cur, rel};
    prev = cur;
  }
  throw ConvergenceError("quadrature did not converge after " +
                         std::to_string(cfg.max_doublings) + " doublings");
}

double eval_poly(std::span<const double> coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> real_roots(std::span<const double> coeffs) {
  const auto c = trimmed(coeffs);
  std::vector<double> roots;
  if (c.size() <= 1) return roots;
  if (c.size() == 2) return {-c[0] / c[1]};
  if (c.size() == 3) {
    const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];
    if (disc < 0.0) return roots;
    const double qq = -0.5 * (c[1] + std::copysign(std::sqrt(disc), c[1]));
    if (qq != 0.0) {
      roots = {qq / c[2], c[0] / qq};
    } else {
      roots = {0.0, 0.0};
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  const auto deg = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto dc = derivative(c);
  for (Eigen::Index i = 0; i < deg; ++i) {
    const auto z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
    double x = z.real();
    for (int it = 0; it < 20; ++it) {
      const double d = eval_poly(dc, x);
      if (d == 0.0) break;
      const double step = eval_poly(c, x) / d;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

LogIntegral log_integral_exp_poly(std::span<const double> coeffs, double beta, bool half_line,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  const auto c = trimmed(coeffs);
  const std::size_t deg = c.empty() ? 0 : c.size() - 1;
  if (deg == 0 || c.back() <= 0.0 || (!half_line && deg % 2 == 1)) {
    throw DomainError("exp(-beta * polynomial) is not integrable on the requested range");
  }
  const auto dc = derivative(c);
  const auto ddc = derivative(dc);
  std::vector<double> candidates;
  for (double x : real_roots(dc)) {
    if (!half_line || x > 0.0) candidates.push_back(x);
  }
  if (half_line) candidates.push_back(0.0);
  double minimum = std::numeric_limits<double>::infinity();
  for (double x : candidates) minimum = std::min(minimum, eval_poly(c, x));

  auto g = [&](double x) { return beta * (eval_poly(c, x) - minimum); };
  const double level = cfg.log_cut() + kCutMargin;
  const auto [lo_it, hi_it] = std::minmax_element(candidates.begin(), candidates.end());
  const double hi = crossing(g, *hi_it, 1.0, level);
  const double lo = half_line ? 0.0 : crossing(g, *lo_it, -1.0, level);

  // Resolve the narrowest feature: Gaussian width at interior minima, or the
  // exponential decay length at the boundary.
  double width = hi - lo;
  for (double x : candidates) {
    const double curv = beta * eval_poly(ddc, x);
    if (curv > 0.0) width = std::min(width, 1.0 / std::sqrt(curv));
    if (half_line && x == 0.0) {
      const double slope = beta * eval_poly(dc, 0.0);
      if (slope > 0.0) width = std::min(width, 1.0 / slope);
    }
  }
  const auto panels = static_cast<std::size_t>(
      std::clamp(std::ceil((hi - lo) / (4.0 * width)), 2.0, 1024.0));
  auto logf = [&](double x) { return -g(x); };
  auto result = log_integrate_interval(logf, lo, hi, panels, cfg);
  result.log_value -= beta * minimum;
  return result;
}

LogIntegral log_integrate_line(const std::function<double(double)>& logf, double scale,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  const double level = cfg.log_cut() + kCutMargin;
  double half_width = std::max(scale, 1e-8);
  for (int expand = 0; expand < 60; ++expand) {
    double top = kNegInf;
    constexpr int kScan = 129;
    for (int i = 0; i < kScan; ++i) {
      const double x = -half_width + 2.0 * half_width * i / (kScan - 1);
      top = std::max(top, logf(x));
    }
    if (top == kNegInf) throw DomainError("integrand vanishes on the scanned range");
    if (logf(-half_width) < top - level && logf(half_width) < top - level) {
      return log_integrate_interval(logf, -half_width, half_width, 16, cfg);
    }
    half_width *= 2.0;
  }
  throw ConvergenceError("integrand does not decay on the real line");
}

}  // namespace phasebound
