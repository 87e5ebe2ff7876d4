#include "phasebound/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

using Eigen::Index;

constexpr double kStateTol = 1e-10;

Index idx(std::size_t n) { return static_cast<Index>(n); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

// The moment words feed symbols of quartic operators.
constexpr std::size_t kMomentOrder = 4;

std::map<Word, cplx> word_moments(const Eigen::MatrixXcd& factors,
                                  const std::vector<double>& weights) {
  std::map<Word, cplx> out;
  for (const auto& w : words_up_to(kMomentOrder)) out[w] = word_expectation(w, factors, weights);
  return out;
}

}  // namespace

SigmaState::SigmaState(ComplexMatrix rho, Kind kind) : rho_(std::move(rho)), kind_(kind) {}

void SigmaState::finish() {
  const auto& m = rho_.data();
  const Index dim = m.rows();
  if (weights_) {
    std::vector<double> fw;
    std::vector<Index> cols;
    for (Index n = 0; n < dim; ++n) {
      const double c = (*weights_)[static_cast<std::size_t>(n)];
      if (c > 0.0) {
        fw.push_back(c);
        cols.push_back(n);
      }
    }
    factor_weights_ = fw;
    factor_vectors_ = Eigen::MatrixXcd::Zero(dim, static_cast<Index>(cols.size()));
    for (std::size_t l = 0; l < cols.size(); ++l) factor_vectors_(cols[l], idx(l)) = 1.0;
  } else if (factor_vectors_.size() == 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw ConvergenceError("sigma: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    if (ev.minCoeff() < -kStateTol) {
      throw DomainError("sigma is not positive semidefinite: eigenvalue " + fmt(ev.minCoeff()));
    }
    std::vector<Index> keep;
    for (Index l = dim - 1; l >= 0; --l) {
      if (ev(l) > 1e-14) keep.push_back(l);
    }
    factor_vectors_.resize(dim, static_cast<Index>(keep.size()));
    for (std::size_t l = 0; l < keep.size(); ++l) {
      factor_weights_.push_back(ev(keep[l]));
      factor_vectors_.col(idx(l)) = solver.eigenvectors().col(keep[l]);
    }
  }
  nbar_ = 0.0;
  n2bar_ = 0.0;
  for (Index n = 0; n < dim; ++n) {
    const double x = static_cast<double>(n);
    nbar_ += x * m(n, n).real();
    n2bar_ += x * x * m(n, n).real();
  }
}

SigmaState SigmaState::from_diagonal(const std::vector<double>& weights, std::size_t dim) {
  if (dim < 2) throw DimensionError("sigma: dim must be at least 2");
  if (weights.empty()) throw DomainError("sigma: at least one weight required");
  if (weights.size() > dim) {
    throw DimensionError("sigma: " + std::to_string(weights.size()) + " weights exceed dim " +
                         std::to_string(dim));
  }
  double sum = 0.0;
  for (double c : weights) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("sigma: negative weight " + fmt(c));
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("sigma: weights sum to " + fmt(sum) + ", defect exceeds 1e-12");
  }
  std::vector<double> padded(weights);
  padded.resize(dim, 0.0);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(idx(dim), idx(dim));
  for (std::size_t n = 0; n < dim; ++n) rho(idx(n), idx(n)) = padded[n];
  SigmaState s(ComplexMatrix(std::move(rho)), Kind::diagonal_weights);
  s.weights_ = std::move(padded);
  s.finish();
  return s;
}

SigmaState SigmaState::fock_projector(std::size_t m, std::size_t dim) {
  if (m >= dim) {
    throw DimensionError("sigma: Fock index " + std::to_string(m) + " out of range for dim " +
                         std::to_string(dim));
  }
  std::vector<double> w(m + 1, 0.0);
  w[m] = 1.0;
  auto s = from_diagonal(w, dim);
  s.kind_ = Kind::fock_projector;
  s.parameter_ = static_cast<double>(m);
  return s;
}

SigmaState SigmaState::squeezed_vacuum(double omega, std::size_t dim) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("squeezed vacuum: omega must be > 0, got " + fmt(omega));
  }
  if (dim < 2) throw DimensionError("sigma: dim must be at least 2");
  // (omega Q + i P) g = 0 is ((omega+1) a + (omega-1) a^dag) g = 0, so
  // sqrt(n+1) g_{n+1} = -t sqrt(n) g_{n-1} with t = (omega-1)/(omega+1).
  const double t = (omega - 1.0) / (omega + 1.0);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(idx(dim));
  g(0) = 1.0;
  for (std::size_t n = 1; n + 1 < dim; n += 2) {
    g(idx(n + 1)) = -t * std::sqrt(static_cast<double>(n) / static_cast<double>(n + 1)) * g(idx(n - 1));
  }
  g /= g.norm();

  // Residual of (omega Q + i P)|g> with one padding row so leakage past the
  // cutoff is counted.
  Eigen::MatrixXcd gm = Eigen::MatrixXcd::Zero(idx(dim + 1), 1);
  gm.topRows(idx(dim)) = g;
  const Eigen::MatrixXcd qg = word_matrix("Q", dim + 1).data() * gm;
  const Eigen::MatrixXcd pg = word_matrix("P", dim + 1).data() * gm;
  const double residual = (omega * qg + cplx(0.0, 1.0) * pg).norm();
  if (residual > 1e-6) {
    throw TruncationError("squeezed vacuum omega=" + fmt(omega) + " not resolved at dim " +
                          std::to_string(dim) + " (residual " + fmt(residual) + ")");
  }
  SigmaState s(ComplexMatrix(g * g.adjoint()), Kind::squeezed_vacuum);
  s.parameter_ = omega;
  s.factor_weights_ = {1.0};
  s.factor_vectors_ = g;
  s.finish();
  return s;
}

SigmaState SigmaState::custom(const ComplexMatrix& rho) {
  const HermitianOperator h(rho);  // throws when not Hermitian
  if (h.hermiticity_defect() > kStateTol) throw DomainError("sigma: not Hermitian to 1e-10");
  const double tr_defect = std::abs(rho.trace() - 1.0);
  if (tr_defect > kStateTol) throw DomainError("sigma: trace differs from 1 by " + fmt(tr_defect));
  SigmaState s(rho, Kind::custom);
  s.finish();
  return s;
}

std::string SigmaState::describe() const {
  switch (kind_) {
    case Kind::fock_projector:
      return "fock:" + std::to_string(static_cast<std::size_t>(parameter_));
    case Kind::squeezed_vacuum:
      return "squeezed:" + fmt(parameter_);
    case Kind::diagonal_weights: {
      std::size_t last = 0;
      for (std::size_t n = 0; n < weights_->size(); ++n) {
        if ((*weights_)[n] != 0.0) last = n;
      }
      std::string out = "diag:";
      for (std::size_t n = 0; n <= last; ++n) out += (n ? "," : "") + fmt((*weights_)[n]);
      return out;
    }
    case Kind::custom:
      return "custom";
  }
  return "custom";
}

SigmaMoments::SigmaMoments(std::map<Word, cplx> words, double nbar, double n2bar,
                           bool number_diagonal)
    : words_(std::move(words)), nbar_(nbar), n2bar_(n2bar), number_diagonal_(number_diagonal) {}

cplx SigmaMoments::moment(const Word& w) const {
  if (w.empty()) return 1.0;
  const auto it = words_.find(w);
  if (it == words_.end()) throw UnsupportedError("moment of word '" + w + "' not available");
  return it->second;
}

double SigmaMoments::delta_q() const {
  const double m = qbar().real();
  return q2().real() - m * m;
}
double SigmaMoments::delta_p() const {
  const double m = pbar().real();
  return p2().real() - m * m;
}
double SigmaMoments::delta_qp() const {
  return 0.5 * (qp() + pq()).real() - qbar().real() * pbar().real();
}

double SigmaMoments::max_odd_moment() const {
  double worst = 0.0;
  for (const auto& [w, v] : words_) {
    if (w.size() % 2 == 1) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

SigmaMoments moments(const SigmaState& sigma) {
  const auto& fv = sigma.factor_vectors();
  const auto& fw = sigma.factor_weights();
  const auto full = word_moments(fv, fw);
  const std::size_t half = trusted_block(sigma.dim());
  if (half >= 1) {
    // Truncating the factors is the same as taking rho's leading block.
    const auto part = word_moments(fv.topRows(idx(half)), fw);
    for (const auto& [w, v] : full) {
      const double diff = std::abs(v - part.at(w));
      if (diff > 1e-7) {
        throw TruncationError("moments of " + sigma.describe() + " not converged at dim " +
                              std::to_string(sigma.dim()) + ": Tr(" + w + " sigma) changes by " +
                              fmt(diff) + " between dim/2 and dim");
      }
    }
  }
  return SigmaMoments(full, sigma.nbar(), sigma.n2bar(), sigma.is_number_diagonal());
}

ClosedFormConstants closed_form_constants(double nbar, double n2bar) {
  if (!(nbar >= 0.0) || n2bar < nbar * nbar - 1e-12 * std::max(1.0, nbar * nbar)) {
    throw DomainError("inconsistent number moments: nbar=" + fmt(nbar) + ", n2bar=" + fmt(n2bar));
  }
  const double x = n2bar + nbar + 0.5;
  return ClosedFormConstants{0.5 + nbar, 0.5 * x, 1.5 * x};
}

EigenDecomposition number_basis(std::size_t dim) {
  std::vector<double> ev(dim);
  for (std::size_t n = 0; n < dim; ++n) ev[n] = static_cast<double>(n);
  return EigenDecomposition{std::move(ev), ComplexMatrix::identity(dim)};
}

double frame_kernel(const SigmaState& sigma, const EigenDecomposition& basis, double p,
                    double q, std::size_t r) {
  const auto& vecs = basis.eigenvectors.data();
  if (basis.eigenvectors.dim() != sigma.dim()) {
    throw DimensionError("frame_kernel: basis and sigma dimensions differ");
  }
  if (r >= sigma.dim()) throw DimensionError("frame_kernel: basis index out of range");
  const auto& fv = sigma.factor_vectors();
  double f = 0.0;
  for (std::size_t l = 0; l < sigma.factor_weights().size(); ++l) {
    const Eigen::VectorXcd moved = displace(fv.col(idx(l)), p, q);
    f += sigma.factor_weights()[l] * std::norm(vecs.col(idx(r)).dot(moved));
  }
  return f;
}

cplx weyl_characteristic(const SigmaState& sigma, double k, double x) {
  const auto& fv = sigma.factor_vectors();
  cplx total = 0.0;
  for (std::size_t l = 0; l < sigma.factor_weights().size(); ++l) {
    const Eigen::VectorXcd b = fv.col(idx(l));
    total += sigma.factor_weights()[l] * b.dot(displace(b, k, x));
  }
  return total;
}

WeylReport check_weyl_nonvanishing(const SigmaState& sigma, const PhaseGrid& grid,
                                   double tolerance) {
  const std::size_t nk = std::max<std::size_t>(grid.k_points, 1);
  const std::size_t nx = std::max<std::size_t>(grid.x_points, 1);
  auto coord = [](double lo, double hi, std::size_t n, std::size_t i) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<cplx> scaled(nk * nx);
  WeylReport report;
  report.min_scaled_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nk; ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      const double k = coord(grid.k_min, grid.k_max, nk, i);
      const double x = coord(grid.x_min, grid.x_max, nx, j);
      const cplx v = weyl_characteristic(sigma, k, x);
      const cplx s = v * std::exp(0.25 * (k * k + x * x));
      scaled[i * nx + j] = s;
      ++report.samples;
      report.min_scaled_abs = std::min(report.min_scaled_abs, std::abs(s));
      if (std::abs(s) < tolerance) report.near_zeros.push_back({k, x, v});
    }
  }
  // A grid edge brackets a zero when the straight segment between its two
  // values passes through the origin of the complex plane.
  auto crosses = [](cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return false;
    const double t = -(std::conj(d) * a).real() / len2;
    if (t <= 0.0 || t >= 1.0) return false;
    return std::abs(a + t * d) < 1e-3 * std::max(std::abs(a), std::abs(b));
  };
  for (std::size_t i = 0; i < nk; ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      const cplx v = scaled[i * nx + j];
      if (i + 1 < nk && crosses(v, scaled[(i + 1) * nx + j])) ++report.bracketed_edges;
      if (j + 1 < nx && crosses(v, scaled[i * nx + j + 1])) ++report.bracketed_edges;
    }
  }
  return report;
}

}  // namespace phasebound
