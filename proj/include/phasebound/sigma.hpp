#pragma once

// Auxiliary density operators sigma and the operator averages Tr(W sigma)
// needed to assemble phase-space symbols.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/fock.hpp"
#include "phasebound/operators.hpp"

namespace phasebound {

/// A density operator: Hermitian, positive semidefinite, unit trace.
///
/// Besides the matrix, the state keeps a spectral factorisation
/// rho = sum_l w_l |b_l><b_l| so that displaced copies U rho U^dag can be
/// handled one vector at a time.
class SigmaState {
 public:
  enum class Kind { diagonal_weights, fock_projector, squeezed_vacuum, custom };

  static SigmaState from_diagonal(const std::vector<double>& weights, std::size_t dim);
  static SigmaState fock_projector(std::size_t m, std::size_t dim);
  static SigmaState squeezed_vacuum(double omega, std::size_t dim);
  static SigmaState custom(const ComplexMatrix& rho);

  const ComplexMatrix& rho() const { return rho_; }
  std::size_t dim() const { return rho_.dim(); }
  Kind kind() const { return kind_; }
  /// Diagonal weights c_n when sigma is a function of N.
  const std::optional<std::vector<double>>& weights() const { return weights_; }
  bool is_number_diagonal() const { return weights_.has_value(); }
  /// Fock index for fock projectors, omega for squeezed vacua.
  double parameter() const { return parameter_; }

  const std::vector<double>& factor_weights() const { return factor_weights_; }
  const Eigen::MatrixXcd& factor_vectors() const { return factor_vectors_; }

  /// Tr(N sigma) and Tr(N^2 sigma).
  double nbar() const { return nbar_; }
  double n2bar() const { return n2bar_; }

  /// Text form accepted by the command line ("fock:3", "diag:0.5,0.5", ...).
  std::string describe() const;

 private:
  SigmaState(ComplexMatrix rho, Kind kind);
  void finish();

  ComplexMatrix rho_;
  Kind kind_;
  std::optional<std::vector<double>> weights_;
  double parameter_ = 0.0;
  std::vector<double> factor_weights_;
  Eigen::MatrixXcd factor_vectors_;
  double nbar_ = 0.0;
  double n2bar_ = 0.0;
};

/// Averages Tr(W sigma) for every word W in Q, P up to length four, plus
/// number-operator moments and the variances built from them.
class SigmaMoments {
 public:
  SigmaMoments(std::map<Word, cplx> words, double nbar, double n2bar,
               bool number_diagonal = false);

  /// Tr(W sigma); the empty word gives 1.
  cplx moment(const Word& w) const;

  cplx qbar() const { return moment("Q"); }
  cplx pbar() const { return moment("P"); }
  cplx q2() const { return moment("QQ"); }
  cplx p2() const { return moment("PP"); }
  cplx qp() const { return moment("QP"); }
  cplx pq() const { return moment("PQ"); }
  cplx q3() const { return moment("QQQ"); }
  cplx p3() const { return moment("PPP"); }
  cplx q4() const { return moment("QQQQ"); }
  cplx p4() const { return moment("PPPP"); }
  cplx q2p() const { return moment("QQP"); }
  cplx qp2() const { return moment("QPP"); }
  cplx pq2() const { return moment("PQQ"); }
  cplx p2q() const { return moment("PPQ"); }
  cplx q2p2() const { return moment("QQPP"); }
  cplx p2q2() const { return moment("PPQQ"); }
  double nbar() const { return nbar_; }
  double n2bar() const { return n2bar_; }
  /// True when the averages come from a sigma that is a function of N.
  bool number_diagonal() const { return number_diagonal_; }

  double delta_q() const;
  double delta_p() const;
  /// Symmetrised covariance (QP + PQ)/2 - Qbar Pbar.
  double delta_qp() const;

  /// Largest |Tr(W sigma)| over words of odd length.
  double max_odd_moment() const;

 private:
  std::map<Word, cplx> words_;
  double nbar_;
  double n2bar_;
  bool number_diagonal_;
};

/// Moments of sigma. The same averages are recomputed from the leading
/// dim/2 block; a difference above 1e-7 means the state is not resolved by
/// the cutoff and raises TruncationError.
SigmaMoments moments(const SigmaState& sigma);

/// C2 = Q^2-bar = P^2-bar, C22, C4 = Q^4-bar = P^4-bar for sigma = sigma(N),
/// written in terms of nbar and n2bar.
struct ClosedFormConstants {
  double c2;
  double c22;
  double c4;
};
ClosedFormConstants closed_form_constants(double nbar, double n2bar);

/// The number basis as an eigen-decomposition (eigenvalues 0..dim-1).
EigenDecomposition number_basis(std::size_t dim);

/// f(p,q|r) = <r| U[p,q] sigma U[p,q]^dag |r> for basis vector r.
double frame_kernel(const SigmaState& sigma, const EigenDecomposition& basis, double p,
                    double q, std::size_t r);

/// Tr(U[k,x] sigma).
cplx weyl_characteristic(const SigmaState& sigma, double k, double x);

struct PhaseGrid {
  double k_min = -4.0;
  double k_max = 4.0;
  double x_min = -4.0;
  double x_max = 4.0;
  std::size_t k_points = 41;
  std::size_t x_points = 41;
};

struct WeylSample {
  double k;
  double x;
  cplx value;
};

/// Result of sampling Tr(U[k,x] sigma) for zeros. Values are compared after
/// removing the Gaussian envelope exp(-(k^2+x^2)/4) every displaced state
/// carries, so the far field does not count as "near zero".
struct WeylReport {
  std::size_t samples = 0;
  double min_scaled_abs = 0.0;
  std::vector<WeylSample> near_zeros;     // scaled |value| below tolerance
  std::size_t bracketed_edges = 0;        // grid edges whose segment crosses 0
  bool has_zeros() const { return !near_zeros.empty() || bracketed_edges > 0; }
};

/// Advisory check of the non-vanishing condition on Tr(U[k,x] sigma). Never
/// throws for a failing report; polynomial observables do not need it.
WeylReport check_weyl_nonvanishing(const SigmaState& sigma, const PhaseGrid& grid,
                                   double tolerance = 1e-6);

}  // namespace phasebound
