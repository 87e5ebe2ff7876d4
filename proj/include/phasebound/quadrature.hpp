#pragma once

// Quadrature for phase-space integrals.
//
// Integrals of exp(-beta * symbol) can span hundreds of orders of magnitude,
// so the scalar routines work with log-integrands and return logarithms.
// Every routine refines by doubling its panel count until two successive
// estimates agree to QuadratureConfig::grid_doubling_tol.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "phasebound/errors.hpp"

namespace phasebound {

struct QuadratureConfig {
  std::size_t radial_nodes = 32;             // Gauss-Legendre nodes per panel
  double tail_eps = 1e-12;                   // integrand envelope at the cutoff
  double grid_doubling_tol = 1e-6;           // relative agreement on doubling
  std::size_t cartesian_nodes_per_axis = 32; // nodes per panel for 2D integrals
  std::size_t max_doublings = 10;

  void validate() const;
  /// -log(tail_eps): how far below its maximum the log-integrand is cut.
  double log_cut() const { return -std::log(tail_eps); }
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached per n).
const GaussRule& gauss_legendre(std::size_t n);

/// A log-integral with its doubling error estimate (relative).
struct LogIntegral {
  double log_value;
  double rel_error;
  double value() const { return std::exp(log_value); }
};

/// log of sum_k w_k exp(l_k), stable for large |l_k|.
double log_sum_exp(std::span<const double> logs, std::span<const double> weights);

/// log int_a^b exp(logf(x)) dx on composite Gauss-Legendre panels, doubling
/// the panel count from `panels` until converged.
LogIntegral log_integrate_interval(const std::function<double(double)>& logf, double a,
                                   double b, std::size_t panels, const QuadratureConfig& cfg);

/// log int exp(-beta * poly(x)) dx, poly given by ascending coefficients.
/// With `half_line` the range is [0, inf), otherwise the whole real line.
/// The integrand must decay: even degree with positive leading coefficient,
/// or on the half line a positive leading coefficient of any degree >= 1.
LogIntegral log_integral_exp_poly(std::span<const double> coeffs, double beta, bool half_line,
                                  const QuadratureConfig& cfg);

/// log int exp(logf(x)) dx over the real line for a general log-integrand
/// that tends to -inf in both directions. `scale` is a rough width.
LogIntegral log_integrate_line(const std::function<double(double)>& logf, double scale,
                               const QuadratureConfig& cfg);

/// Real roots of a polynomial (ascending coefficients), sorted.
std::vector<double> real_roots(std::span<const double> coeffs);

double eval_poly(std::span<const double> coeffs, double x);

/// Integral of f over a disc of radius `radius` in polar coordinates:
/// Gauss-Legendre in r on `radial_panels` panels and the trapezoid rule in the
/// angle (exact for trigonometric polynomials of degree < angular_points).
/// T needs +=, scalar * T.
template <typename T, typename F>
T integrate_disc(F&& f, double radius, std::size_t radial_panels, std::size_t radial_nodes,
                 std::size_t angular_points, T zero) {
  const auto& rule = gauss_legendre(radial_nodes);
  const double h = radius / static_cast<double>(radial_panels);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angular_points);
  T total = zero;
  for (std::size_t panel = 0; panel < radial_panels; ++panel) {
    const double a = h * static_cast<double>(panel);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = a + 0.5 * h * (rule.nodes[i] + 1.0);
      const double wr = 0.5 * h * rule.weights[i] * r * dtheta;
      for (std::size_t j = 0; j < angular_points; ++j) {
        const double theta = dtheta * static_cast<double>(j);
        total += wr * f(r * std::sin(theta), r * std::cos(theta));
      }
    }
  }
  return total;
}

}  // namespace phasebound
