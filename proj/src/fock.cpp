#include "phasebound/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

using Eigen::Index;

Index idx(std::size_t n) { return static_cast<Index>(n); }

void require_dim(std::size_t dim) {
  if (dim < 2) {
    throw DimensionError("Fock dimension must be at least 2, got " + std::to_string(dim));
  }
}

// log(k!) for k = 0..n
std::vector<double> log_factorials(std::size_t n) {
  std::vector<double> lf(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  return lf;
}

// Geometry shared by every matrix element of U[p,q].
struct DisplacementGeometry {
  double s;          // p^2 + q^2
  double x;          // s / 2, the Laguerre argument
  double log_r;      // log(|q + ip| / sqrt 2); -inf at the origin
  double phase;      // arg(q + ip)
  bool at_origin;
};

DisplacementGeometry geometry(double p, double q) {
  DisplacementGeometry g{};
  g.s = p * p + q * q;
  g.x = 0.5 * g.s;
  g.at_origin = g.s == 0.0;
  g.log_r = g.at_origin ? -std::numeric_limits<double>::infinity() : 0.5 * std::log(g.x);
  g.phase = std::atan2(p, q);
  return g;
}

// <n|U|n'> for n >= n' given k = n - n' and L = L_{n'}^k(x).
cplx lower_entry(const DisplacementGeometry& g, const std::vector<double>& lf, std::size_t n,
                 std::size_t k, double laguerre) {
  if (g.at_origin) return k == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
  const std::size_t np = n - k;
  const double log_mag =
      0.5 * (lf[np] - lf[n]) + static_cast<double>(k) * g.log_r - 0.25 * g.s;
  return std::polar(std::exp(log_mag) * laguerre, static_cast<double>(k) * g.phase);
}

// <n|U|n'> for n < n' from <n'|U[-p,-q]|n>^*: flipping (p,q) adds pi to the
// phase, so the entry is (-1)^k times the conjugated mirror element.
cplx upper_entry(const DisplacementGeometry& g, const std::vector<double>& lf, std::size_t n,
                 std::size_t np, double laguerre) {
  const std::size_t k = np - n;
  cplx mirror = lower_entry(g, lf, np, k, laguerre);
  if (k % 2 == 1) mirror = -mirror;
  return std::conj(mirror);
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) {
    throw DimensionError("ComplexMatrix must be square, got " + std::to_string(data_.rows()) +
                         "x" + std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) throw DomainError("ComplexMatrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  return ComplexMatrix(Eigen::MatrixXcd::Identity(idx(dim), idx(dim)));
}

ComplexMatrix ComplexMatrix::zero(std::size_t dim) {
  return ComplexMatrix(Eigen::MatrixXcd::Zero(idx(dim), idx(dim)));
}

ComplexMatrix ComplexMatrix::leading_block(std::size_t n) const {
  if (n > dim()) throw DimensionError("leading block larger than matrix");
  return ComplexMatrix(data_.topLeftCorner(idx(n), idx(n)));
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(data_.adjoint()); }

double ComplexMatrix::max_abs() const {
  return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff();
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (other.dim() != dim()) throw DimensionError("max_abs_diff: dimension mismatch");
  return (data_ - other.data_).cwiseAbs().maxCoeff();
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix product: dimension mismatch");
  return ComplexMatrix(a.data_ * b.data_);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix sum: dimension mismatch");
  return ComplexMatrix(a.data_ + b.data_);
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix difference: dimension mismatch");
  return ComplexMatrix(a.data_ - b.data_);
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) { return ComplexMatrix(s * a.data_); }

HermitianOperator::HermitianOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  const auto& m = matrix_.data();
  defect_ = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(matrix_.max_abs(), std::numeric_limits<double>::min());
  if (defect_ > 1e-10 * scale) {
    throw DomainError("operator is not Hermitian: defect " + std::to_string(defect_));
  }
}

ComplexMatrix annihilation(std::size_t dim) {
  require_dim(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(idx(dim), idx(dim));
  for (std::size_t n = 0; n + 1 < dim; ++n) {
    a(idx(n), idx(n + 1)) = std::sqrt(static_cast<double>(n + 1));
  }
  return ComplexMatrix(std::move(a));
}

Quadratures quadratures(std::size_t dim) {
  const Eigen::MatrixXcd a = annihilation(dim).data();
  const Eigen::MatrixXcd ad = a.adjoint();
  const double r = 1.0 / std::numbers::sqrt2;
  const cplx minus_i(0.0, -1.0);
  return Quadratures{HermitianOperator(ComplexMatrix(r * (a + ad))),
                     HermitianOperator(ComplexMatrix(minus_i * r * (a - ad)))};
}

std::vector<double> laguerre_sequence(unsigned n_max, unsigned m, double x) {
  std::vector<double> l(n_max + 1);
  l[0] = 1.0;
  if (n_max == 0) return l;
  l[1] = 1.0 + m - x;
  for (unsigned j = 1; j < n_max; ++j) {
    l[j + 1] = ((2.0 * j + 1.0 + m - x) * l[j] - (j + static_cast<double>(m)) * l[j - 1]) /
               (j + 1.0);
  }
  return l;
}

double laguerre_assoc(unsigned n, unsigned m, double x) {
  // Forward recurrence; the explicit alternating sum cancels badly once
  // x is a few units and n is moderate.
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + m - x;
  for (unsigned k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

ComplexMatrix displacement_matrix(std::size_t dim, double p, double q) {
  require_dim(dim);
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("displacement must be finite");
  const auto g = geometry(p, q);
  if (g.at_origin) return ComplexMatrix::identity(dim);
  const auto lf = log_factorials(dim);
  Eigen::MatrixXcd u(idx(dim), idx(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto lag = laguerre_sequence(static_cast<unsigned>(dim - 1 - k),
                                       static_cast<unsigned>(k), g.x);
    for (std::size_t np = 0; np + k < dim; ++np) {
      const std::size_t n = np + k;
      u(idx(n), idx(np)) = lower_entry(g, lf, n, k, lag[np]);
      if (k > 0) u(idx(np), idx(n)) = upper_entry(g, lf, np, n, lag[np]);
    }
  }
  return ComplexMatrix(std::move(u));
}

Eigen::VectorXcd displaced_number_state(std::size_t dim, double p, double q, std::size_t n) {
  require_dim(dim);
  if (n >= dim) throw DimensionError("number state index out of range");
  Eigen::VectorXcd col = Eigen::VectorXcd::Zero(idx(dim));
  const auto g = geometry(p, q);
  if (g.at_origin) {
    col(idx(n)) = 1.0;
    return col;
  }
  const auto lf = log_factorials(dim);
  for (std::size_t row = 0; row < dim; ++row) {
    if (row >= n) {
      const std::size_t k = row - n;
      col(idx(row)) = lower_entry(g, lf, row, k,
                                  laguerre_assoc(static_cast<unsigned>(n),
                                                 static_cast<unsigned>(k), g.x));
    } else {
      const std::size_t k = n - row;
      col(idx(row)) = upper_entry(g, lf, row, n,
                                  laguerre_assoc(static_cast<unsigned>(row),
                                                 static_cast<unsigned>(k), g.x));
    }
  }
  return col;
}

Eigen::VectorXcd displace(const Eigen::VectorXcd& v, double p, double q) {
  const auto dim = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> support;
  for (std::size_t n = 0; n < dim; ++n) {
    if (v(idx(n)) != cplx(0.0, 0.0)) support.push_back(n);
  }
  // Few nonzeros: sum the needed columns instead of building the full matrix.
  if (support.size() * 8 <= dim) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(idx(dim));
    for (std::size_t n : support) out += v(idx(n)) * displaced_number_state(dim, p, q, n);
    return out;
  }
  return displacement_matrix(dim, p, q).data() * v;
}

EigenDecomposition hermitian_eigs(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix().data());
  if (solver.info() != Eigen::Success) {
    // Eigen caps the implicit QL sweeps at 30 per row.
    throw ConvergenceError("Hermitian eigensolver did not converge within " +
                           std::to_string(30 * a.dim()) + " QL iterations (dim " +
                           std::to_string(a.dim()) + ")");
  }
  const auto& ev = solver.eigenvalues();
  return EigenDecomposition{std::vector<double>(ev.data(), ev.data() + ev.size()),
                            ComplexMatrix(solver.eigenvectors())};
}

ComplexMatrix conjugate_by_displacement(const ComplexMatrix& a, double p, double q) {
  const auto u = displacement_matrix(a.dim(), p, q);
  return ComplexMatrix(u.data() * a.data() * u.data().adjoint());
}

}  // namespace phasebound
