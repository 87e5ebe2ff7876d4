#include "phasebound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace phasebound {

namespace {

constexpr double kTailRel = 1e-12;
constexpr double kGapCert = 1e-6;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive, got " + fmt(beta));
}

// Ascending coefficients of the p-only and q-only parts of a polynomial
// without cross terms; the constant goes to `constant`.
struct Split {
  std::vector<double> p;
  std::vector<double> q;
  double constant = 0.0;
};

std::optional<Split> split(const Bivariate& b) {
  Split s;
  for (const auto& [k, c] : b) {
    const auto [i, j] = k;
    if (i > 0 && j > 0) return std::nullopt;
    if (i == 0 && j == 0) {
      s.constant += c;
    } else if (j == 0) {
      if (s.p.size() <= i) s.p.resize(i + 1, 0.0);
      s.p[i] += c;
    } else {
      if (s.q.size() <= j) s.q.resize(j + 1, 0.0);
      s.q[j] += c;
    }
  }
  return s;
}

// log int exp(-beta poly(x)) dx over the real line; Gaussians in closed form.
LogIntegral line_integral(std::vector<double> c, double beta, const QuadratureConfig& quad) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() == 3 && c[2] > 0.0) {
    const double a = c[2];
    const double b = c[1];
    return {0.5 * std::log(std::numbers::pi / (beta * a)) + beta * (b * b / (4.0 * a) - c[0]), 0.0};
  }
  return log_integral_exp_poly(c, beta, false, quad);
}

// Minimum of a univariate polynomial on the real line (or s >= 0).
std::optional<double> poly_minimum(std::vector<double> c, bool half_line) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty()) return 0.0;
  if (c.size() == 1) return c[0];
  const std::size_t deg = c.size() - 1;
  if (c.back() < 0.0 || (!half_line && deg % 2 == 1)) return std::nullopt;
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  double best = half_line ? c[0] : std::numeric_limits<double>::infinity();
  for (double x : real_roots(d)) {
    if (half_line && x < 0.0) continue;
    best = std::min(best, eval_poly(c, x));
  }
  return best;
}

Bivariate bivariate_of(const OperatorPolynomial& poly) {
  Bivariate b;
  for (const auto& [w, c] : poly.terms()) {
    unsigned ip = 0;
    unsigned iq = 0;
    for (char letter : w) (letter == 'P' ? ip : iq) += 1;
    b[{ip, iq}] += c;
  }
  return b;
}

BoundResult bound_pair_impl(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                            const SigmaState& sigma_upper, double beta,
                            const QuadratureConfig& quad, const TrustedSpectrum* spectrum) {
  check_beta(beta);
  if (!sigma_upper.is_number_diagonal()) {
    throw UnsupportedError("upper symbols are implemented for sigma = sigma(N) only, got " +
                           sigma_upper.describe());
  }
  BoundResult r;
  r.beta = beta;
  r.sigma_lower_desc = sigma_lower.describe();
  r.sigma_upper_desc = sigma_upper.describe();

  const auto lower_sym = lower_symbol_closed(h, moments(sigma_lower));
  const auto upper_sym =
      upper_symbol(h, upper_coefficients(sigma_upper.nbar(), sigma_upper.n2bar()));
  const auto lo = phase_space_integral(lower_sym, beta, quad);
  const auto up = phase_space_integral(upper_sym, beta, quad);
  r.log_lower = lo.log_value;
  r.log_upper = up.log_value;
  r.lower = std::exp(lo.log_value);
  r.upper = std::exp(up.log_value);
  if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || r.lower == 0.0) {
    throw ConvergenceError("bounds at beta=" + fmt(beta) + " over/underflow double precision");
  }
  r.f_lower = -up.log_value / beta;
  r.f_upper = -lo.log_value / beta;
  r.quad_error = lo.rel_error + up.rel_error;

  double log_z = 0.0;
  double tail = 0.0;
  if (spectrum) {
    try {
      const auto z = z_exact_from_levels(spectrum->levels, spectrum->next_level, beta);
      log_z = z.log_value;
      tail = z.tail_ratio;
      r.z_exact = z.value();
    } catch (const TruncationError& e) {
      r.z_exact_note = e.what();
    }
  }
  try {
    r.z_classical = classical_partition(h, beta, quad);
  } catch (const Error&) {
  }

  // Each integral carries its doubling error; allow a few times that.
  const double budget = 1e-9 + 10.0 * r.quad_error + tail;
  const double slack = std::log1p(budget);
  std::string bad;
  if (r.z_exact) {
    if (r.log_lower - log_z > slack) bad = "lower bound exceeds exact Z";
    if (log_z - r.log_upper > slack) bad = "exact Z exceeds upper bound";
  } else if (r.log_lower - r.log_upper > slack) {
    bad = "lower bound exceeds upper bound";
  }
  if (!bad.empty()) {
    throw SandwichFailure(bad + " at beta=" + fmt(beta) + " (lower=" + fmt(r.lower) +
                              ", exact=" + (r.z_exact ? fmt(*r.z_exact) : "n/a") +
                              ", upper=" + fmt(r.upper) + ")",
                          r);
  }
  return r;
}

}  // namespace

// ------------------------------------------------------------ exact Z

ExactPartition z_exact_from_levels(const std::vector<double>& trusted, double next_level,
                                   double beta) {
  check_beta(beta);
  if (trusted.empty()) throw DimensionError("empty spectrum");
  const double mu0 = trusted.front();
  double partial = 0.0;
  for (double mu : trusted) partial += std::exp(-beta * (mu - mu0));
  const double tail = std::exp(-beta * (next_level - mu0)) / partial;
  if (!(tail < kTailRel)) {
    throw TruncationError("spectral tail exp(-beta mu_T) is " + fmt(tail) +
                          " of the partial sum at beta=" + fmt(beta) + " with " +
                          std::to_string(trusted.size()) + " trusted levels (need < 1e-12)");
  }
  return {-beta * mu0 + std::log(partial), tail, trusted.size()};
}

ExactPartition z_exact(const HermitianOperator& h, double beta) {
  check_beta(beta);
  const auto eig = hermitian_eigs(h);
  const std::size_t t = trusted_block(h.dim());
  std::vector<double> levels(eig.eigenvalues.begin(), eig.eigenvalues.begin() + t);
  return z_exact_from_levels(levels, eig.eigenvalues[t], beta);
}

TrustedSpectrum trusted_spectrum(const HamiltonianSpec& h, std::size_t dim) {
  if (dim < 4) throw DimensionError("spectrum needs dim >= 4");
  const auto eig = hermitian_eigs(h.matrix(dim));
  const std::size_t t = trusted_block(dim);
  return {std::vector<double>(eig.eigenvalues.begin(), eig.eigenvalues.begin() + t),
          eig.eigenvalues[t]};
}

// ------------------------------------------------------- phase-space integrals

LogIntegral phase_space_integral(const PhaseSymbol& symbol, double beta,
                                 const QuadratureConfig& quad) {
  check_beta(beta);
  quad.validate();
  constexpr double kLog2Pi = 1.8378770664093453;
  if (symbol.form() == PhaseSymbol::Form::radial) {
    const auto& c = symbol.radial_coefficients();
    if (c.c2 > 0.0) {
      auto r = log_integral_exp_poly(std::vector<double>{c.c0, c.c1, c.c2}, beta, true, quad);
      r.log_value -= std::numbers::ln2;
      return r;
    }
    if (c.c2 == 0.0 && c.c1 > 0.0) {
      // (1/2) int_0^inf exp(-beta (c0 + c1 s)) ds
      return {-beta * c.c0 - std::log(2.0 * beta * c.c1), 0.0};
    }
    throw DomainError("radial symbol " + symbol.describe() + " is not integrable");
  }
  if (symbol.form() == PhaseSymbol::Form::bivariate) {
    if (const auto s = split(symbol.expanded())) {
      if (s->p.empty() || s->q.empty()) {
        throw DomainError("symbol " + symbol.describe() + " is not integrable over phase space");
      }
      const auto ip = line_integral(s->p, beta, quad);
      const auto iq = line_integral(s->q, beta, quad);
      return {ip.log_value + iq.log_value - beta * s->constant - kLog2Pi,
              ip.rel_error + iq.rel_error};
    }
  }
  return phase_space_integral_2d(symbol, beta, quad);
}

LogIntegral phase_space_integral_2d(const PhaseSymbol& symbol, double beta,
                                    const QuadratureConfig& cfg) {
  check_beta(beta);
  cfg.validate();
  QuadratureConfig quad = cfg;
  quad.radial_nodes = cfg.cartesian_nodes_per_axis;
  constexpr double kLog2Pi = 1.8378770664093453;
  const double scale = 4.0 / std::sqrt(beta);
  double worst = 0.0;
  std::function<double(double)> outer;
  if (symbol.form() == PhaseSymbol::Form::closure) {
    outer = [&](double p) {
      auto inner = [&](double q) { return -beta * symbol(p, q); };
      const auto r = log_integrate_line(inner, scale, quad);
      worst = std::max(worst, r.rel_error);
      return r.log_value;
    };
  } else {
    const auto coeffs = symbol.expanded();
    outer = [&, coeffs](double p) {
      std::vector<double> c;
      for (const auto& [k, v] : coeffs) {
        if (c.size() <= k.second) c.resize(k.second + 1, 0.0);
        c[k.second] += v * std::pow(p, static_cast<double>(k.first));
      }
      const auto r = log_integral_exp_poly(c, beta, false, quad);
      worst = std::max(worst, r.rel_error);
      return r.log_value;
    };
  }
  auto r = log_integrate_line(outer, scale, quad);
  r.log_value -= kLog2Pi;
  r.rel_error += worst;
  return r;
}

std::optional<double> symbol_minimum(const PhaseSymbol& symbol) {
  if (symbol.form() == PhaseSymbol::Form::radial) {
    const auto& c = symbol.radial_coefficients();
    return poly_minimum({c.c0, c.c1, c.c2}, true);
  }
  if (symbol.form() == PhaseSymbol::Form::bivariate) {
    if (const auto s = split(symbol.expanded())) {
      const auto mp = poly_minimum(s->p, false);
      const auto mq = poly_minimum(s->q, false);
      if (mp && mq) return *mp + *mq + s->constant;
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------ bound pairs

BoundResult bound_pair(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                       const SigmaState& sigma_upper, double beta, const QuadratureConfig& quad,
                       std::size_t dim) {
  const auto spectrum = trusted_spectrum(h, dim);
  return bound_pair_impl(h, sigma_lower, sigma_upper, beta, quad, &spectrum);
}

BetaGrid::BetaGrid(std::vector<double> v) : values(std::move(v)) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DomainError("beta grid values must be positive and finite");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw DomainError("beta grid must be strictly increasing");
    }
  }
}

BetaGrid BetaGrid::log_spaced(double lo, double hi, std::size_t steps) {
  if (!(lo > 0.0) || !(hi >= lo) || steps < 1) {
    throw DomainError("beta grid needs 0 < beta_min <= beta_max and steps >= 1");
  }
  if (steps == 1 || hi == lo) return BetaGrid({lo});
  std::vector<double> v(steps);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return BetaGrid(std::move(v));
}

std::vector<SweepPoint> sweep(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                              const SigmaState& sigma_upper, const BetaGrid& grid,
                              const QuadratureConfig& quad, std::size_t dim) {
  std::vector<SweepPoint> out;
  if (grid.values.empty()) return out;
  const auto spectrum = trusted_spectrum(h, dim);
  for (double beta : grid.values) {
    SweepPoint pt{beta, std::nullopt, {}};
    try {
      pt.result = bound_pair_impl(h, sigma_lower, sigma_upper, beta, quad, &spectrum);
    } catch (const SandwichFailure& e) {
      pt.result = e.result;
      pt.error = e.what();
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

// ------------------------------------------------------------ ground state

EnergyBounds energy_bounds(const HamiltonianSpec& h, const SigmaState& sigma_lower,
                           const SigmaState& sigma_upper, double beta_probe,
                           const QuadratureConfig& quad, std::size_t dim) {
  check_beta(beta_probe);
  const auto spectrum = trusted_spectrum(h, dim);
  const auto& mu = spectrum.levels;
  const double mu0 = mu.front();
  double gap = spectrum.next_level - mu0;
  for (double m : mu) {
    if (m - mu0 > 1e-9 * (1.0 + std::abs(mu0))) {
      gap = m - mu0;
      break;
    }
  }
  if (!(std::exp(-beta_probe * gap) < kGapCert)) {
    throw DomainError("probe beta=" + fmt(beta_probe) + " too small for spectral gap " + fmt(gap) +
                      " (need exp(-beta gap) < 1e-6)");
  }
  const auto r = bound_pair_impl(h, sigma_lower, sigma_upper, beta_probe, quad, &spectrum);
  double d = 0.0;
  for (double m : mu) d += std::exp(-beta_probe * (m - mu0));

  EnergyBounds e{};
  e.beta = beta_probe;
  e.e0_lower = r.f_lower;
  e.e0_upper_raw = r.f_upper;
  e.slack = std::log(d) / beta_probe;
  e.e0_upper = e.e0_upper_raw + e.slack;
  e.limit_upper = symbol_minimum(lower_symbol_closed(h, moments(sigma_lower)));
  e.limit_lower = symbol_minimum(
      upper_symbol(h, upper_coefficients(sigma_upper.nbar(), sigma_upper.n2bar())));
  e.gap = gap;
  e.exact_e0 = mu0;
  return e;
}

// ------------------------------------------------------------ classical

PhaseSymbol classical_symbol(const HamiltonianSpec& h) {
  const Bivariate b = bivariate_of(h.polynomial());
  if (h.kind() == HamiltonianSpec::Kind::number_poly) {
    auto at = [&b](unsigned i, unsigned j) {
      const auto it = b.find({i, j});
      return it == b.end() ? 0.0 : it->second;
    };
    return PhaseSymbol::radial(at(0, 0), at(2, 0), at(4, 0));
  }
  return PhaseSymbol::bivariate(b);
}

double classical_partition(const HamiltonianSpec& h, double beta, const QuadratureConfig& quad) {
  check_beta(beta);
  switch (h.kind()) {
    case HamiltonianSpec::Kind::harmonic:
      return 1.0 / (beta * h.omega());
    case HamiltonianSpec::Kind::anharmonic: {
      const double l = h.lambda();
      const double x = beta / (16.0 * l);
      return std::sqrt(l / beta) * bessel_k_scaled(0.25, x) /
             (2.0 * l * std::sqrt(2.0 * std::numbers::pi));
    }
    case HamiltonianSpec::Kind::number_poly:
      return phase_space_integral(classical_symbol(h), beta, quad).value();
  }
  throw UnsupportedError("no classical partition function for " + h.label());
}

double bessel_k_scaled(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k needs x > 0, got " + fmt(x));
  const double a = std::abs(nu);
  auto logf = [&](double t) {
    const double at = a * t;
    const double log_cosh = at + std::log1p(std::exp(-2.0 * at)) - std::numbers::ln2;
    // cosh t - 1 = 2 sinh^2(t/2), accurate near 0
    const double sh = std::sinh(0.5 * t);
    return -2.0 * x * sh * sh + log_cosh;
  };
  // Upper limit where the integrand has dropped by e^-50 from its scale.
  double hi = 1.0;
  while (logf(hi) > -50.0 - std::max(0.0, logf(0.0))) hi *= 1.5;
  QuadratureConfig cfg;
  cfg.grid_doubling_tol = 1e-13;
  cfg.max_doublings = 16;
  return log_integrate_interval(logf, 0.0, hi, 8, cfg).value();
}

double bessel_k(double nu, double x) { return std::exp(-x) * bessel_k_scaled(nu, x); }

}  // namespace phasebound
