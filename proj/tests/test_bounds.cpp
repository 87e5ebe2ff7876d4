#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "phasebound/bounds.hpp"
#include "phasebound/errors.hpp"

using namespace phasebound;

namespace {

// sum_n exp(-beta (n-a)(n-b)), summed until the terms are negligible.
double kerr_sum(double a, double b, double beta) {
  double z = 0;
  for (int n = 0; n < 100000; ++n) {
    const double e = (n - a) * (n - b);
    const double t = std::exp(-beta * e);
    z += t;
    if (n > b && t < 1e-18 * z) break;
  }
  return z;
}

// int exp(-beta (q^2/2 + l q^4/2)) dq over the real line.
double quartic_line(double beta, double l) {
  auto f = [&](double q) { return std::exp(-beta * (q * q / 2 + l * q * q * q * q / 2)); };
  const double cut = 40.0 / std::pow(beta, 0.25) + 40.0 / std::sqrt(beta);
  return 2 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, cut, 20, 1e-14);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("exact partition function") {
  const auto h = HamiltonianSpec::harmonic().matrix(128);
  for (double beta : {0.5, 1.0, 5.0}) {
    const auto z = z_exact(h, beta);
    CHECK(rel(z.value(), 0.5 / std::sinh(beta / 2)) < 1e-10);
    CHECK(z.tail_ratio < 1e-12);
  }
  CHECK_THROWS_AS(z_exact(h, 0.05), TruncationError);
  CHECK_THROWS_AS(z_exact(h, -1.0), DomainError);

  const auto k = HamiltonianSpec::kerr(1, 5);
  const auto spec = trusted_spectrum(k, 128);
  CHECK(spec.levels.size() == 64);
  for (double beta : {0.05, 1.0, 50.0}) {
    const auto z = z_exact_from_levels(spec.levels, spec.next_level, beta);
    CHECK(z.log_value == doctest::Approx(std::log(kerr_sum(1, 5, beta))).epsilon(1e-12));
  }
}

TEST_CASE("phase-space integrals") {
  QuadratureConfig quad;
  // exp(-beta(p^2+q^2)/2): 1/beta.
  for (double beta : {0.01, 1.0, 30.0}) {
    const auto g = PhaseSymbol::radial(0, 0.5, 0);
    CHECK(phase_space_integral(g, beta, quad).value() == doctest::Approx(1 / beta).epsilon(1e-12));
    CHECK(phase_space_integral_2d(g, beta, quad).value() == doctest::Approx(1 / beta).epsilon(1e-8));
  }
  // Separable non-radial polynomial against the nested route.
  const auto sep = PhaseSymbol::bivariate({{{2, 0}, 0.5}, {{0, 2}, 0.3}, {{0, 4}, 0.5}, {{0, 0}, -1.0}});
  for (double beta : {0.1, 1.0, 10.0}) {
    const double a = phase_space_integral(sep, beta, quad).log_value;
    const double b = phase_space_integral_2d(sep, beta, quad).log_value;
    CHECK(std::abs(a - b) < 1e-8);
  }
  // Radial quartic against the erfc closed form:
  // (1/2) int_0^inf exp(-beta (s^2/4 - 7s/2 + 33/4)) ds
  const auto kerr = PhaseSymbol::radial(33.0 / 4, -3.5, 0.25);
  for (double beta : {0.005, 0.5, 20.0}) {
    const double a = beta / 4;
    const double b = -3.5 * beta;
    const double log_expect = -beta * 33.0 / 4 + b * b / (4 * a) + 0.5 * std::log(std::numbers::pi / a) -
                              2 * std::numbers::ln2 + std::log(std::erfc(b / (2 * std::sqrt(a))));
    CHECK(phase_space_integral(kerr, beta, quad).log_value == doctest::Approx(log_expect).epsilon(1e-10));
  }
  // Closures only through the nested route.
  const auto clo = PhaseSymbol::closure([](double p, double q) { return (p * p + q * q) / 2; });
  CHECK(phase_space_integral(clo, 2.0, quad).value() == doctest::Approx(0.5).epsilon(1e-8));
  // Non-confining symbols are refused.
  const auto open = PhaseSymbol::radial(0, -1, 0);
  CHECK_THROWS_AS(phase_space_integral(open, 1.0, quad), DomainError);
}

TEST_CASE("symbol minima") {
  CHECK(*symbol_minimum(PhaseSymbol::radial(12, -4.5, 0.25)) == doctest::Approx(-8.25));
  CHECK(*symbol_minimum(PhaseSymbol::radial(1, 2, 0)) == doctest::Approx(1));
  CHECK(*symbol_minimum(PhaseSymbol::bivariate({{{2, 0}, 0.5}, {{0, 2}, -1.0}, {{0, 4}, 0.5}})) ==
        doctest::Approx(-0.5));
  CHECK_FALSE(symbol_minimum(PhaseSymbol::closure([](double, double) { return 0.0; })).has_value());
}

TEST_CASE("harmonic sandwich") {
  QuadratureConfig quad;
  const auto vac = SigmaState::fock_projector(0, 64);
  for (double beta : {0.5, 1.0, 2.0, 5.0}) {
    const auto r = bound_pair(HamiltonianSpec::harmonic(), vac, vac, beta, quad, 128);
    CHECK(rel(r.lower, std::exp(-beta / 2) / beta) < 1e-10);
    CHECK(rel(r.upper, std::exp(beta / 2) / beta) < 1e-10);
    REQUIRE(r.z_exact.has_value());
    CHECK(r.lower <= *r.z_exact);
    CHECK(*r.z_exact <= r.upper);
    CHECK(r.f_lower <= r.f_upper);
    CHECK(*r.z_classical == doctest::Approx(1 / beta));
  }
  // Without a certified spectrum the exact column is left empty, not guessed.
  const auto hot = bound_pair(HamiltonianSpec::harmonic(), vac, vac, 0.05, quad, 64);
  CHECK_FALSE(hot.z_exact.has_value());
  CHECK_FALSE(hot.z_exact_note.empty());
  // Upper sigma must be a function of N.
  CHECK_THROWS_AS(bound_pair(HamiltonianSpec::harmonic(), vac, SigmaState::squeezed_vacuum(2, 64), 1.0, quad, 64),
                  UnsupportedError);
}

TEST_CASE("sandwich holds across families, states and temperatures") {
  QuadratureConfig quad;
  const std::size_t dim = 128;
  const std::vector<HamiltonianSpec> hs = {HamiltonianSpec::harmonic(2.0), HamiltonianSpec::kerr(1, 5),
                                           HamiltonianSpec::anharmonic(1.0), HamiltonianSpec::anharmonic(0.1)};
  const std::vector<std::pair<SigmaState, SigmaState>> pairs = {
      {SigmaState::fock_projector(0, dim), SigmaState::fock_projector(0, dim)},
      {SigmaState::fock_projector(3, dim), SigmaState::fock_projector(3, dim)},
      {SigmaState::squeezed_vacuum(1.5, dim), SigmaState::from_diagonal({0.5, 0.5}, dim)}};
  for (const auto& h : hs) {
    for (const auto& [lo, up] : pairs) {
      const auto pts = sweep(h, lo, up, BetaGrid({0.1, 0.3, 1.0, 3.0, 10.0}), quad, 256);
      for (const auto& pt : pts) {
        CAPTURE(h.label());
        CAPTURE(lo.describe());
        CAPTURE(pt.beta);
        CAPTURE(pt.error);
        REQUIRE(pt.result.has_value());
        CHECK(pt.error.empty());
        const auto& r = *pt.result;
        CHECK(r.lower > 0);
        CHECK(r.log_lower <= r.log_upper);
        if (r.z_exact) {
          CHECK(r.lower <= *r.z_exact * (1 + 1e-9));
          CHECK(*r.z_exact <= r.upper * (1 + 1e-9));
        }
      }
    }
  }
}

TEST_CASE("Kerr: tight lower sigma still stays below the exact value") {
  QuadratureConfig quad;
  const auto h = HamiltonianSpec::kerr(1, 5);
  const auto s3 = SigmaState::fock_projector(3, 64);
  const auto s0 = SigmaState::fock_projector(0, 64);
  for (double beta : {1.0, 10.0, 50.0}) {
    const auto r = bound_pair(h, s3, s0, beta, quad, 128);
    REQUIRE(r.z_exact);
    CHECK(r.log_lower <= std::log(*r.z_exact));
    CHECK(r.f_upper >= -std::log(*r.z_exact) / beta);
  }
}

TEST_CASE("beta grids and sweeps") {
  CHECK_THROWS_AS(BetaGrid({1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(BetaGrid({0.0}), DomainError);
  CHECK_THROWS_AS(BetaGrid::log_spaced(1, 0.5, 3), DomainError);
  const auto g = BetaGrid::log_spaced(0.1, 10, 5);
  REQUIRE(g.values.size() == 5);
  CHECK(g.values[2] == doctest::Approx(1.0));
  CHECK(g.values.back() == 10.0);
  QuadratureConfig quad;
  const auto vac = SigmaState::fock_projector(0, 32);
  CHECK(sweep(HamiltonianSpec::harmonic(), vac, vac, BetaGrid({}), quad, 64).empty());
  // Determinism: repeated runs give identical numbers.
  const auto a = sweep(HamiltonianSpec::kerr(1, 5), vac, vac, g, quad, 128);
  const auto b = sweep(HamiltonianSpec::kerr(1, 5), vac, vac, g, quad, 128);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].result->log_lower == b[i].result->log_lower);
    CHECK(a[i].result->log_upper == b[i].result->log_upper);
  }
}

TEST_CASE("free energy bounds bracket an increasing free energy") {
  QuadratureConfig quad;
  const auto vac = SigmaState::fock_projector(0, 64);
  const auto pts = sweep(HamiltonianSpec::anharmonic(1.0), vac, vac, BetaGrid({1, 2, 5, 10, 20, 40}), quad, 256);
  double prev = -1e300;
  for (const auto& pt : pts) {
    REQUIRE(pt.result->z_exact);
    const double f = -std::log(*pt.result->z_exact) / pt.beta;
    CHECK(pt.result->f_lower <= f + 1e-12);
    CHECK(f <= pt.result->f_upper + 1e-12);
    // dF/dbeta = S / beta^2 >= 0
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("ground state energy brackets") {
  QuadratureConfig quad;
  const auto vac = SigmaState::fock_projector(0, 64);
  const auto e = energy_bounds(HamiltonianSpec::harmonic(), vac, vac, 60.0, quad, 128);
  CHECK(e.exact_e0 == doctest::Approx(0.5));
  CHECK(e.e0_lower <= 0.5);
  CHECK(e.e0_upper >= 0.5);
  CHECK(*e.limit_upper == doctest::Approx(0.5));
  CHECK(*e.limit_lower == doctest::Approx(-0.5));

  const auto s3 = SigmaState::fock_projector(3, 64);
  const auto k = energy_bounds(HamiltonianSpec::kerr(1, 5), s3, vac, 50.0, quad, 128);
  CHECK(k.exact_e0 == doctest::Approx(-4.0));
  CHECK(k.e0_lower <= -4.0);
  CHECK(k.e0_upper >= -4.0);
  CHECK(*k.limit_upper >= -4.0);
  CHECK(*k.limit_lower <= -4.0);
  CHECK_THROWS_AS(energy_bounds(HamiltonianSpec::kerr(1, 5), s3, vac, 1.0, quad, 128), DomainError);
}

TEST_CASE("classical partition functions") {
  QuadratureConfig quad;
  CHECK(classical_partition(HamiltonianSpec::harmonic(2.0), 0.5, quad) == doctest::Approx(1.0));
  for (double beta : {0.01, 0.1, 1.0, 10.0}) {
    for (double l : {1.0, 0.2}) {
      const double expect = std::sqrt(2 * std::numbers::pi / beta) * quartic_line(beta, l) / (2 * std::numbers::pi);
      const auto h = HamiltonianSpec::anharmonic(l);
      CHECK(rel(classical_partition(h, beta, quad), expect) < 1e-10);
      CHECK(rel(phase_space_integral_2d(classical_symbol(h), beta, quad).value(), expect) < 1e-7);
    }
  }
  // Kerr: approaches sqrt(pi/beta)/2 at high temperature.
  const auto kerr = HamiltonianSpec::kerr(1, 5);
  CHECK(rel(classical_partition(kerr, 1e-4, quad), std::sqrt(std::numbers::pi / 1e-4) / 2) < 0.05);
}

TEST_CASE("modified Bessel function") {
  for (double nu : {0.0, 0.25, 0.5, 1.0, 2.5}) {
    for (double x : {0.01, 0.1, 1.0, 5.0, 30.0}) {
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(rel(bessel_k(nu, x), boost::math::cyl_bessel_k(nu, x)) < 1e-12);
    }
  }
  for (double x : {0.3, 2.0, 7.0}) CHECK(rel(bessel_k(0.5, x), std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x)) < 1e-13);
  // Large x: exp(x) K_nu(x) ~ sqrt(pi/2x)(1 + (4nu^2-1)/8x)
  const double x = 400.0;
  const double asym = std::sqrt(std::numbers::pi / (2 * x)) * (1 + (0.25 - 1) / (8 * x) + (0.25 - 1) * (0.25 - 9) / (2 * 64 * x * x));
  CHECK(rel(bessel_k_scaled(0.25, x), asym) < 1e-8);
  CHECK_THROWS_AS(bessel_k(0.25, 0.0), DomainError);
}
