#pragma once

// Test-side oracle for the upper-symbol coefficients of a number-diagonal
// sigma = sum c_n |n><n|. The unknown constants are solved from the
// identity  Husimi(r, s) = sum_n c_n int upper(p + r, q + s) p_n(p, q) dp dq / 2pi
// with p_n = exp(-x/2) (x/2)^n / n!, x = p^2 + q^2, by adaptive Gauss-Kronrod
// in the radius and an exact trapezoid rule in the angle.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

struct Coefficients {
  double k2, k4, k6, a2, a4;
};

// sum_n c_n int g(p, q) p_n(p, q) dp dq / 2pi for a polynomial g of degree <= 4.
inline double weighted_average(const std::vector<double>& c,
                               const std::function<double(double, double)>& g) {
  const int angles = 24;  // exact for trigonometric degree < 24
  double total = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] == 0) continue;
    auto radial = [&](double rho) {
      const double x = rho * rho;
      const double pn = std::exp(-x / 2 + n * std::log(x / 2) - std::lgamma(n + 1.0));
      double ang = 0;
      for (int j = 0; j < angles; ++j) {
        const double t = 2 * std::numbers::pi * j / angles;
        ang += g(rho * std::sin(t), rho * std::cos(t));
      }
      return rho * pn * ang / angles;
    };
    total += c[n] * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                        radial, 0.0, 40.0, 15, 1e-13);
  }
  return total;
}

// Solve for the constants from the identities at two shifts each.
inline Coefficients solve(const std::vector<double>& c) {
  Coefficients out{};
  auto s_of = [](double p, double q) { return p * p + q * q; };
  // P^2+Q^2: Husimi r^2 + s^2 + 1; k2 = (r^2+s^2+1) - <(p+r)^2+(q+s)^2>.
  {
    const double r = 0.7;
    const double u = 0.3;
    const double shift = s_of(r, u);
    const double base = weighted_average(c, [&](double p, double q) { return s_of(p + r, q + u); });
    out.k2 = shift + 1 - base;
  }
  // (P^2+Q^2)^2: Husimi (S+1)^2 + 2S, S = r^2 + s^2. Linear in (k4, k6).
  {
    double m[2][3];
    const double shifts[2][2] = {{0.0, 0.0}, {1.1, -0.6}};
    for (int i = 0; i < 2; ++i) {
      const double r = shifts[i][0];
      const double u = shifts[i][1];
      const double S = s_of(r, u);
      const double i4 = weighted_average(c, [&](double p, double q) {
        const double v = s_of(p + r, q + u);
        return v * v;
      });
      const double i2 = weighted_average(c, [&](double p, double q) { return s_of(p + r, q + u); });
      const double husimi = (S + 1) * (S + 1) + 2 * S;
      m[i][0] = i2;
      m[i][1] = 1.0;
      m[i][2] = husimi - i4;
    }
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    out.k4 = (m[0][2] * m[1][1] - m[0][1] * m[1][2]) / det;
    out.k6 = (m[0][0] * m[1][2] - m[0][2] * m[1][0]) / det;
  }
  // Q^4: Husimi s^4 + 3 s^2 + 3/4. Linear in (a2, a4).
  {
    double m[2][3];
    const double shifts[2] = {0.0, 0.9};
    for (int i = 0; i < 2; ++i) {
      const double u = shifts[i];
      const double i4 = weighted_average(c, [&](double, double q) { return std::pow(q + u, 4); });
      const double i2 = weighted_average(c, [&](double, double q) { return std::pow(q + u, 2); });
      m[i][0] = i2;
      m[i][1] = 1.0;
      m[i][2] = std::pow(u, 4) + 3 * u * u + 0.75 - i4;
    }
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    out.a2 = (m[0][2] * m[1][1] - m[0][1] * m[1][2]) / det;
    out.a4 = (m[0][0] * m[1][2] - m[0][2] * m[1][0]) / det;
  }
  return out;
}

}  // namespace oracle
