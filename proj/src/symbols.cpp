#include "phasebound/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

using Eigen::Index;

constexpr double kLeakTol = 1e-10;
constexpr double kReconstructTol = 1e-5;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

double ipow(double x, unsigned k) {
  double v = 1.0;
  for (unsigned i = 0; i < k; ++i) v *= x;
  return v;
}

// Highest basis index carrying weight in any spectral factor of sigma.
std::size_t support_top(const SigmaState& sigma) {
  const auto& fv = sigma.factor_vectors();
  std::size_t top = 0;
  for (Index l = 0; l < fv.cols(); ++l) {
    for (Index i = fv.rows() - 1; i >= 0; --i) {
      if (std::abs(fv(i, l)) > 1e-14) {
        top = std::max(top, static_cast<std::size_t>(i));
        break;
      }
    }
  }
  return top;
}

// Radius beyond which exp(-s/2)-type tails times the polynomial are below
// the tail tolerance.
double envelope_radius(double core, unsigned degree, const QuadratureConfig& quad) {
  const double growth = degree * std::log(core + 10.0);
  return core + std::sqrt(2.0 * (quad.log_cut() + growth)) + 2.0;
}

}  // namespace

// ---------------------------------------------------------------- PhaseSymbol

PhaseSymbol PhaseSymbol::bivariate(Bivariate coeffs) {
  for (const auto& [k, c] : coeffs) {
    if (!std::isfinite(c)) throw DomainError("symbol coefficient is not finite");
  }
  PhaseSymbol s;
  s.form_ = Form::bivariate;
  for (const auto& [k, c] : coeffs) {
    if (c != 0.0) s.coeffs_[k] = c;
  }
  return s;
}

PhaseSymbol PhaseSymbol::radial(double c0, double c1, double c2) {
  if (!std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw DomainError("symbol coefficient is not finite");
  }
  PhaseSymbol s;
  s.form_ = Form::radial;
  s.radial_ = {c0, c1, c2};
  return s;
}

PhaseSymbol PhaseSymbol::closure(std::function<double(double, double)> f) {
  if (!f) throw DomainError("empty symbol closure");
  PhaseSymbol s;
  s.form_ = Form::closure;
  s.f_ = std::move(f);
  return s;
}

double PhaseSymbol::operator()(double p, double q) const {
  switch (form_) {
    case Form::radial: {
      const double s = p * p + q * q;
      return radial_.c0 + s * (radial_.c1 + s * radial_.c2);
    }
    case Form::bivariate: {
      double v = 0.0;
      for (const auto& [k, c] : coeffs_) v += c * ipow(p, k.first) * ipow(q, k.second);
      return v;
    }
    case Form::closure:
      return f_(p, q);
  }
  return 0.0;
}

const PhaseSymbol::Radial& PhaseSymbol::radial_coefficients() const {
  if (form_ != Form::radial) throw UnsupportedError("symbol is not radial");
  return radial_;
}

Bivariate PhaseSymbol::expanded() const {
  if (form_ == Form::bivariate) return coeffs_;
  if (form_ == Form::closure) throw UnsupportedError("closure symbol has no coefficients");
  Bivariate b;
  auto add = [&b](unsigned i, unsigned j, double c) {
    if (c != 0.0) b[{i, j}] += c;
  };
  add(0, 0, radial_.c0);
  add(2, 0, radial_.c1);
  add(0, 2, radial_.c1);
  add(4, 0, radial_.c2);
  add(2, 2, 2.0 * radial_.c2);
  add(0, 4, radial_.c2);
  return b;
}

unsigned PhaseSymbol::degree() const {
  if (form_ == Form::closure) throw UnsupportedError("closure symbol has no degree");
  if (form_ == Form::radial) return radial_.c2 != 0.0 ? 4 : (radial_.c1 != 0.0 ? 2 : 0);
  unsigned d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, k.first + k.second);
  return d;
}

std::string PhaseSymbol::describe() const {
  std::ostringstream os;
  os.precision(15);
  switch (form_) {
    case Form::radial:
      os << radial_.c2 << "*s^2 + " << radial_.c1 << "*s + " << radial_.c0;
      break;
    case Form::bivariate: {
      bool first = true;
      for (const auto& [k, c] : coeffs_) {
        os << (first ? "" : " + ") << c;
        if (k.first) os << "*p^" << k.first;
        if (k.second) os << "*q^" << k.second;
        first = false;
      }
      if (first) os << 0;
      break;
    }
    case Form::closure:
      os << "<numeric>";
      break;
  }
  return os.str();
}

// ------------------------------------------------------------- coefficients

UpperCoefficients upper_coefficients(double nbar, double n2bar) {
  closed_form_constants(nbar, n2bar);  // consistency check
  UpperCoefficients c{};
  c.nbar = nbar;
  c.n2bar = n2bar;
  c.k2 = -1.0 - 2.0 * nbar;
  // Anti-normal symbol of (P^2+Q^2)^2 = (2N+1)^2 is s^2 - 4s + 1; the sigma
  // corrections follow from int s^k f(s) over the frame density of sigma(N).
  c.k4 = -4.0 - 8.0 * nbar;
  c.k6 = 1.0 + 12.0 * nbar + 16.0 * nbar * nbar - 4.0 * n2bar;
  c.a2 = -3.0 * (1.0 + 2.0 * nbar);
  c.a4 = 3.0 * (0.25 + 1.5 * nbar + 2.0 * nbar * nbar - 0.5 * n2bar);
  return c;
}

// ------------------------------------------------------------ lower symbols

SymbolValue lower_symbol_numeric(const HermitianOperator& h, const SigmaState& sigma, double p,
                                 double q) {
  if (h.dim() != sigma.dim()) throw DimensionError("lower symbol: operator and sigma dims differ");
  const auto& a = h.matrix().data();
  const auto& fv = sigma.factor_vectors();
  cplx total = 0.0;
  double kept = 0.0;
  for (std::size_t l = 0; l < sigma.factor_weights().size(); ++l) {
    const double w = sigma.factor_weights()[l];
    const Eigen::VectorXcd v = displace(fv.col(static_cast<Index>(l)), p, q);
    total += w * v.dot(a * v);
    kept += w * v.squaredNorm();
  }
  const double leak = std::max(0.0, 1.0 - kept);
  return SymbolValue{total.real(), std::abs(total.imag()), leak, leak > kLeakTol};
}

cplx lower_symbol_numeric(const ComplexMatrix& a, const SigmaState& sigma, double p, double q) {
  if (a.dim() != sigma.dim()) throw DimensionError("lower symbol: operator and sigma dims differ");
  const auto& fv = sigma.factor_vectors();
  cplx total = 0.0;
  for (std::size_t l = 0; l < sigma.factor_weights().size(); ++l) {
    const Eigen::VectorXcd v = displace(fv.col(static_cast<Index>(l)), p, q);
    total += sigma.factor_weights()[l] * v.dot(a.data() * v);
  }
  return total;
}

ComplexBivariate lower_symbol_word(const Word& w, const SigmaMoments& m, bool drop_odd) {
  validate_word(w);
  if (w.size() > 16) throw UnsupportedError("word too long for the moment expansion");
  ComplexBivariate out;
  const unsigned n = static_cast<unsigned>(w.size());
  // Bit i set: position i keeps its operator; otherwise it contributes the
  // c-number shift (U^dag Q U = Q + q, U^dag P U = P + p).
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Word kept;
    unsigned ip = 0;
    unsigned iq = 0;
    for (unsigned i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        kept += w[i];
      } else if (w[i] == 'P') {
        ++ip;
      } else {
        ++iq;
      }
    }
    if (drop_odd && kept.size() % 2 == 1) continue;
    out[{ip, iq}] += m.moment(kept);
  }
  return out;
}

PhaseSymbol lower_symbol_closed(const HamiltonianSpec& h, const SigmaMoments& m,
                                TablePath path) {
  const bool symmetric = path == TablePath::symmetric;
  if (symmetric && m.max_odd_moment() > 1e-10) {
    throw DomainError("symmetric moment table requested but sigma has odd moment " +
                      fmt(m.max_odd_moment()));
  }
  ComplexBivariate acc;
  const auto poly = h.polynomial();
  for (const auto& [w, c] : poly.terms()) {
    for (const auto& [k, v] : lower_symbol_word(w, m, symmetric)) acc[k] += c * v;
  }
  Bivariate real;
  double scale = 1.0;
  for (const auto& [k, v] : acc) scale = std::max(scale, std::abs(v));
  for (const auto& [k, v] : acc) {
    if (std::abs(v.imag()) > 1e-9 * scale) {
      throw Error("lower symbol of a Hermitian operator has imaginary part " + fmt(v.imag()));
    }
    if (std::abs(v.real()) > 1e-14 * scale) real[k] = v.real();
  }

  if (h.kind() == HamiltonianSpec::Kind::number_poly && m.number_diagonal()) {
    auto coef = [&](unsigned i, unsigned j) {
      const auto it = real.find({i, j});
      return it == real.end() ? 0.0 : it->second;
    };
    const double c2 = coef(4, 0);
    const double c1 = coef(2, 0);
    const double c0 = coef(0, 0);
    const double tol = 1e-9 * scale;
    Bivariate residual = real;
    for (const auto& [k, c] : PhaseSymbol::radial(c0, c1, c2).expanded()) residual[k] -= c;
    for (const auto& [k, c] : residual) {
      if (std::abs(c) > tol) {
        throw Error("number polynomial with sigma(N) did not give a radial symbol (term p^" +
                    std::to_string(k.first) + " q^" + std::to_string(k.second) + " = " + fmt(c) +
                    ")");
      }
    }
    return PhaseSymbol::radial(c0, c1, c2);
  }
  return PhaseSymbol::bivariate(std::move(real));
}

// ------------------------------------------------------------ upper symbols

PhaseSymbol upper_symbol(UpperBlock block, const UpperCoefficients& c) {
  switch (block) {
    case UpperBlock::p2q2:
      return PhaseSymbol::radial(c.k2, 1.0, 0.0);
    case UpperBlock::p2q2_squared:
      return PhaseSymbol::radial(c.k6, c.k4, 1.0);
    case UpperBlock::q4:
      return PhaseSymbol::bivariate({{{0, 4}, 1.0}, {{0, 2}, c.a2}, {{0, 0}, c.a4}});
  }
  throw UnsupportedError("unknown upper-symbol block");
}

PhaseSymbol upper_symbol(const HamiltonianSpec& h, const UpperCoefficients& c) {
  switch (h.kind()) {
    case HamiltonianSpec::Kind::harmonic: {
      const double w2 = h.omega() * h.omega();
      // P^2 -> p^2 + k2/2 and Q^2 -> q^2 + k2/2 for rotation-invariant sigma
      if (w2 == 1.0) return PhaseSymbol::radial(0.5 * c.k2, 0.5, 0.0);
      return PhaseSymbol::bivariate(
          {{{2, 0}, 0.5}, {{0, 2}, 0.5 * w2}, {{0, 0}, 0.25 * (1.0 + w2) * c.k2}});
    }
    case HamiltonianSpec::Kind::number_poly: {
      // N = (S - 1)/2 and N^2 = (S^2 - 2S + 1)/4 with S = P^2 + Q^2
      const auto& n = h.number_coeffs();
      const double c0 = n[0] + 0.5 * n[1] * (c.k2 - 1.0) + 0.25 * n[2] * (c.k6 - 2.0 * c.k2 + 1.0);
      const double c1 = 0.5 * n[1] + 0.25 * n[2] * (c.k4 - 2.0);
      const double c2 = 0.25 * n[2];
      return PhaseSymbol::radial(c0, c1, c2);
    }
    case HamiltonianSpec::Kind::anharmonic: {
      const double l = h.lambda();
      return PhaseSymbol::bivariate({{{2, 0}, 0.5},
                                     {{0, 2}, 0.5 + 0.5 * l * c.a2},
                                     {{0, 4}, 0.5 * l},
                                     {{0, 0}, 0.5 * c.k2 + 0.5 * l * c.a4}});
    }
  }
  throw UnsupportedError("no upper symbol for " + h.label());
}

// ------------------------------------------------------- quadrature checks

ComplexMatrix reconstruct_operator(const PhaseSymbol& upper, const SigmaState& sigma,
                                   const QuadratureConfig& quad, std::size_t block) {
  quad.validate();
  if (block == 0) block = trusted_block(sigma.dim());
  if (block > sigma.dim()) throw DimensionError("reconstruction block exceeds sigma dimension");
  const std::size_t top = support_top(sigma);
  const unsigned deg = upper.form() == PhaseSymbol::Form::closure ? 4 : upper.degree();
  const double core = std::numbers::sqrt2 * (std::sqrt(double(block)) + std::sqrt(top + 1.0));
  const double radius = envelope_radius(core, deg, quad);
  const std::size_t angular = 2 * (top + block) + deg + 8;
  const auto b = static_cast<Index>(block);
  const auto& fv = sigma.factor_vectors();
  const auto& fw = sigma.factor_weights();

  auto f = [&](double p, double q) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(b, b);
    const double u = upper(p, q);
    for (std::size_t l = 0; l < fw.size(); ++l) {
      const Eigen::VectorXcd v = displace(fv.col(static_cast<Index>(l)), p, q).head(b);
      m.noalias() += (fw[l] * u) * (v * v.adjoint());
    }
    return m;
  };
  auto run = [&](std::size_t panels) {
    Eigen::MatrixXcd total =
        integrate_disc<Eigen::MatrixXcd>(f, radius, panels, quad.radial_nodes, angular,
                                         Eigen::MatrixXcd::Zero(b, b));
    return Eigen::MatrixXcd(total / (2.0 * std::numbers::pi));
  };
  std::size_t panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(radius / 4.0)));
  Eigen::MatrixXcd prev = run(panels);
  for (std::size_t d = 0; d < quad.max_doublings; ++d) {
    panels *= 2;
    Eigen::MatrixXcd cur = run(panels);
    const double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff < kReconstructTol) return ComplexMatrix(std::move(cur));
    prev = std::move(cur);
  }
  throw ConvergenceError("operator reconstruction did not converge under grid doubling");
}

double convolve_to_lower(const PhaseSymbol& upper, const SigmaState& sigma, double r, double s,
                         const QuadratureConfig& quad) {
  quad.validate();
  const std::size_t top = support_top(sigma);
  const unsigned deg = upper.form() == PhaseSymbol::Form::closure ? 4 : upper.degree();
  const double core = 2.0 * std::numbers::sqrt2 * std::sqrt(top + 1.0);
  const double radius = envelope_radius(core + std::hypot(r, s), deg, quad);
  const std::size_t angular = 4 * (top + 1) + deg + 8;
  const auto& fv = sigma.factor_vectors();
  const auto& fw = sigma.factor_weights();

  // (u, v) = (r - p, s - q) is the displacement between the two copies.
  auto f = [&](double u, double v) {
    double kernel = 0.0;
    for (std::size_t l = 0; l < fw.size(); ++l) {
      const Eigen::VectorXcd moved = displace(fv.col(static_cast<Index>(l)), u, v);
      for (std::size_t k = 0; k < fw.size(); ++k) {
        kernel += fw[l] * fw[k] * std::norm(fv.col(static_cast<Index>(k)).dot(moved));
      }
    }
    return kernel * upper(r - u, s - v);
  };
  auto run = [&](std::size_t panels) {
    return integrate_disc(f, radius, panels, quad.radial_nodes, angular, 0.0) /
           (2.0 * std::numbers::pi);
  };
  std::size_t panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(radius / 4.0)));
  double prev = run(panels);
  for (std::size_t d = 0; d < quad.max_doublings; ++d) {
    panels *= 2;
    const double cur = run(panels);
    if (std::abs(cur - prev) < kReconstructTol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw ConvergenceError("convolution integral did not converge under grid doubling");
}

double husimi_special_case(const HermitianOperator& h, double p, double q) {
  const auto dim = static_cast<Index>(h.dim());
  const cplx alpha = cplx(q, p) / std::numbers::sqrt2;
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c.dot(h.matrix().data() * c).real();
}

}  // namespace phasebound
