#pragma once

// Truncated Fock-space linear algebra for a single bosonic mode.
//
// Basis states |0>, ..., |dim-1>. Quadratures follow
//   Q = (a + a^dag)/sqrt(2),  P = (a - a^dag)/(i sqrt(2)),
// so that [Q, P] = i and (Q + iP)|0> = 0. The Weyl operator
// U[p,q] = exp(i(pQ - qP)) is the displacement D(alpha) with
// alpha = (q + ip)/sqrt(2); it shifts Q by q and P by p.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace phasebound {

using cplx = std::complex<double>;

/// Dense square complex matrix over the truncated number basis.
///
/// Entries are validated to be finite at construction; the object is
/// immutable afterwards.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(Eigen::MatrixXcd data);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  cplx operator()(std::size_t row, std::size_t col) const {
    return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  const Eigen::MatrixXcd& data() const { return data_; }

  /// Leading n x n sub-block.
  ComplexMatrix leading_block(std::size_t n) const;
  ComplexMatrix adjoint() const;
  cplx trace() const { return data_.trace(); }
  double max_abs() const;
  /// max |this - other| over all entries; dimensions must agree.
  double max_abs_diff(const ComplexMatrix& other) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a);

 private:
  Eigen::MatrixXcd data_;
};

/// A ComplexMatrix that passed the Hermiticity check
/// max|A - A^dag| <= 1e-10 * max|A|.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  double hermiticity_defect() const { return defect_; }
  std::size_t dim() const { return matrix_.dim(); }

 private:
  ComplexMatrix matrix_;
  double defect_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column r is |r>
};

/// Number of basis states on which truncated operator products are trusted.
constexpr std::size_t trusted_block(std::size_t dim) { return dim / 2; }

ComplexMatrix annihilation(std::size_t dim);

struct Quadratures {
  HermitianOperator q;
  HermitianOperator p;
};
Quadratures quadratures(std::size_t dim);

/// Associated Laguerre polynomial L_n^m(x). Uses the explicit finite sum for
/// n <= 20 and the three-term recurrence in n beyond that.
double laguerre_assoc(unsigned n, unsigned m, double x);

/// L_0^m(x), ..., L_{n_max}^m(x) by the three-term recurrence.
std::vector<double> laguerre_sequence(unsigned n_max, unsigned m, double x);

/// Matrix of U[p,q] on the first dim number states. Every entry is the exact
/// infinite-dimensional matrix element <n|U[p,q]|n'>.
ComplexMatrix displacement_matrix(std::size_t dim, double p, double q);

/// Column n' of U[p,q] (rows 0..dim-1), i.e. the displaced number state
/// U[p,q]|n'> in the truncated basis.
Eigen::VectorXcd displaced_number_state(std::size_t dim, double p, double q, std::size_t n);

/// U[p,q] v for a vector supported on the first dim basis states. Rows are
/// exact; only the norm leaking past dim is lost.
Eigen::VectorXcd displace(const Eigen::VectorXcd& v, double p, double q);

EigenDecomposition hermitian_eigs(const HermitianOperator& a);

/// U[p,q] A U[p,q]^dag with U built at the dimension of A.
ComplexMatrix conjugate_by_displacement(const ComplexMatrix& a, double p, double q);

}  // namespace phasebound
