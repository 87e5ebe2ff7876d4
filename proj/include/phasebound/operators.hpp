#pragma once

// Polynomials in the non-commuting quadratures Q and P, and the Hamiltonian
// families the engine knows how to bound.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "phasebound/fock.hpp"

namespace phasebound {

/// An ordered operator product over {'Q','P'}, read left to right:
/// "QQPP" is Q Q P P. The empty word is the identity.
using Word = std::string;

void validate_word(const Word& w);

/// All words of length 1..max_len in lexicographic order (Q before P).
std::vector<Word> words_up_to(std::size_t max_len);

/// Matrix of a word on the first dim number states. The product is formed
/// with enough padding that every returned entry is exact.
ComplexMatrix word_matrix(const Word& w, std::size_t dim);

/// Tr(W rho) for rho supported on the first rho.rows() number states. Exact:
/// the ladder operators act on a padded copy, so nothing leaks at the cutoff.
cplx word_expectation(const Word& w, const Eigen::MatrixXcd& rho);
/// Same for rho = sum_l weights[l] |b_l><b_l| with the b_l as columns of
/// `factors`; cost grows with the rank instead of the dimension.
cplx word_expectation(const Word& w, const Eigen::MatrixXcd& factors,
                      const std::vector<double>& weights);

/// Real linear combination of words with like terms merged.
class OperatorPolynomial {
 public:
  OperatorPolynomial() = default;
  static OperatorPolynomial constant(double c);
  static OperatorPolynomial monomial(const Word& w, double coeff = 1.0);

  const std::map<Word, double>& terms() const { return terms_; }
  std::size_t degree() const;

  OperatorPolynomial& operator+=(const OperatorPolynomial& other);
  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b);
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);
  friend OperatorPolynomial operator*(double s, OperatorPolynomial a);

  /// Exact truncation of the operator to dim number states.
  ComplexMatrix matrix(std::size_t dim) const;

  /// The c-number function obtained by replacing Q -> q, P -> p.
  double classical(double p, double q) const;

 private:
  void add(const Word& w, double c);
  std::map<Word, double> terms_;
};

/// Hamiltonian families with closed-form symbol machinery.
///
///   harmonic(w)      (P^2 + w^2 Q^2)/2
///   number_poly(c)   c0 + c1 N + c2 N^2, N = a^dag a   (kerr(a,b) = (N-a)(N-b))
///   anharmonic(l)    (P^2 + Q^2)/2 + l Q^4/2
class HamiltonianSpec {
 public:
  enum class Kind { harmonic, number_poly, anharmonic };

  static HamiltonianSpec harmonic(double omega = 1.0);
  static HamiltonianSpec kerr(double a, double b);
  static HamiltonianSpec number_poly(std::vector<double> coeffs);
  static HamiltonianSpec anharmonic(double lambda);

  Kind kind() const { return kind_; }
  double omega() const { return omega_; }
  double lambda() const { return lambda_; }
  /// (c0, c1, c2) for number polynomials; empty otherwise.
  const std::vector<double>& number_coeffs() const { return number_coeffs_; }

  /// Text form accepted by the command line (e.g. "kerr:1,5").
  const std::string& label() const { return label_; }

  OperatorPolynomial polynomial() const;
  HermitianOperator matrix(std::size_t dim) const;
  /// Classical Hamiltonian H_cl(p, q): the polynomial with Q, P as numbers.
  double classical(double p, double q) const { return polynomial().classical(p, q); }

 private:
  HamiltonianSpec() = default;
  Kind kind_ = Kind::harmonic;
  double omega_ = 1.0;
  double lambda_ = 0.0;
  std::vector<double> number_coeffs_;
  std::string label_;
};

}  // namespace phasebound
