#include "phasebound/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

using Eigen::Index;

// Left-multiply by Q or P acting on the infinite ladder, restricted to the
// rows of m (m must carry enough zero padding rows).
Eigen::MatrixXcd apply_letter(char letter, const Eigen::MatrixXcd& m) {
  const Index rows = m.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, m.cols());
  const double r = 1.0 / std::numbers::sqrt2;
  for (Index i = 0; i < rows; ++i) {
    const double down = std::sqrt(static_cast<double>(i));      // a^dag: row i-1 -> i
    const double up = std::sqrt(static_cast<double>(i + 1));    // a:     row i+1 -> i
    if (letter == 'Q') {
      if (i > 0) out.row(i) += (r * down) * m.row(i - 1);
      if (i + 1 < rows) out.row(i) += (r * up) * m.row(i + 1);
    } else {
      // P = -i (a - a^dag)/sqrt 2
      const cplx c(0.0, -r);
      if (i + 1 < rows) out.row(i) += (c * up) * m.row(i + 1);
      if (i > 0) out.row(i) -= (c * down) * m.row(i - 1);
    }
  }
  return out;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

}  // namespace

void validate_word(const Word& w) {
  for (char c : w) {
    if (c != 'Q' && c != 'P') throw DomainError("operator word may only contain Q and P: " + w);
  }
}

std::vector<Word> words_up_to(std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Word> level{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : level) {
      next.push_back(w + 'Q');
      next.push_back(w + 'P');
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

ComplexMatrix word_matrix(const Word& w, std::size_t dim) {
  validate_word(w);
  if (dim < 1) throw DimensionError("word_matrix: dim must be positive");
  const Index padded = static_cast<Index>(dim + w.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(padded, static_cast<Index>(dim));
  for (auto it = w.rbegin(); it != w.rend(); ++it) m = apply_letter(*it, m);
  return ComplexMatrix(m.topRows(static_cast<Index>(dim)));
}

cplx word_expectation(const Word& w, const Eigen::MatrixXcd& rho) {
  validate_word(w);
  const Index dim = rho.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim + static_cast<Index>(w.size()), rho.cols());
  m.topRows(dim) = rho;
  for (auto it = w.rbegin(); it != w.rend(); ++it) m = apply_letter(*it, m);
  return m.topRows(dim).trace();
}

cplx word_expectation(const Word& w, const Eigen::MatrixXcd& factors,
                      const std::vector<double>& weights) {
  validate_word(w);
  if (static_cast<Index>(weights.size()) != factors.cols()) {
    throw DimensionError("word_expectation: one weight per factor column");
  }
  const Index dim = factors.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim + static_cast<Index>(w.size()), factors.cols());
  m.topRows(dim) = factors;
  for (auto it = w.rbegin(); it != w.rend(); ++it) m = apply_letter(*it, m);
  cplx total = 0.0;
  for (Index l = 0; l < factors.cols(); ++l) {
    total += weights[static_cast<std::size_t>(l)] * factors.col(l).dot(m.col(l).head(dim));
  }
  return total;
}

OperatorPolynomial OperatorPolynomial::constant(double c) {
  OperatorPolynomial p;
  p.add("", c);
  return p;
}

OperatorPolynomial OperatorPolynomial::monomial(const Word& w, double coeff) {
  validate_word(w);
  OperatorPolynomial p;
  p.add(w, coeff);
  return p;
}

void OperatorPolynomial::add(const Word& w, double c) {
  if (c == 0.0) return;
  auto& slot = terms_[w];
  slot += c;
  if (slot == 0.0) terms_.erase(w);
}

std::size_t OperatorPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.size());
  return d;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) {
  a += b;
  return a;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) out.add(wa + wb, ca * cb);
  }
  return out;
}

OperatorPolynomial operator*(double s, OperatorPolynomial a) {
  OperatorPolynomial out;
  for (const auto& [w, c] : a.terms_) out.add(w, s * c);
  return out;
}

ComplexMatrix OperatorPolynomial::matrix(std::size_t dim) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (const auto& [w, c] : terms_) m += c * word_matrix(w, dim).data();
  return ComplexMatrix(std::move(m));
}

double OperatorPolynomial::classical(double p, double q) const {
  double total = 0.0;
  for (const auto& [w, c] : terms_) {
    double v = c;
    for (char letter : w) v *= letter == 'Q' ? q : p;
    total += v;
  }
  return total;
}

HamiltonianSpec HamiltonianSpec::harmonic(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("harmonic: omega must be > 0");
  HamiltonianSpec h;
  h.kind_ = Kind::harmonic;
  h.omega_ = omega;
  h.label_ = omega == 1.0 ? "harmonic" : "harmonic:" + format_number(omega);
  return h;
}

HamiltonianSpec HamiltonianSpec::kerr(double a, double b) {
  auto h = number_poly({a * b, -(a + b), 1.0});
  h.label_ = "kerr:" + format_number(a) + "," + format_number(b);
  return h;
}

HamiltonianSpec HamiltonianSpec::number_poly(std::vector<double> coeffs) {
  if (coeffs.empty() || coeffs.size() > 3) {
    throw UnsupportedError("number polynomial must have 1 to 3 coefficients (degree <= 2)");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("number polynomial coefficients must be finite");
  }
  HamiltonianSpec h;
  h.kind_ = Kind::number_poly;
  coeffs.resize(3, 0.0);
  h.number_coeffs_ = std::move(coeffs);
  std::string label = "numberpoly:";
  for (std::size_t k = 0; k < 3; ++k) {
    label += (k ? "," : "") + format_number(h.number_coeffs_[k]);
  }
  h.label_ = label;
  return h;
}

HamiltonianSpec HamiltonianSpec::anharmonic(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("anharmonic: lambda must be > 0");
  }
  HamiltonianSpec h;
  h.kind_ = Kind::anharmonic;
  h.lambda_ = lambda;
  h.label_ = "anharmonic:" + format_number(lambda);
  return h;
}

OperatorPolynomial HamiltonianSpec::polynomial() const {
  using OP = OperatorPolynomial;
  switch (kind_) {
    case Kind::harmonic:
      return 0.5 * OP::monomial("PP") + (0.5 * omega_ * omega_) * OP::monomial("QQ");
    case Kind::anharmonic:
      return 0.5 * OP::monomial("PP") + 0.5 * OP::monomial("QQ") +
             (0.5 * lambda_) * OP::monomial("QQQQ");
    case Kind::number_poly: {
      // N = (P^2 + Q^2 - 1)/2
      const OP n = 0.5 * OP::monomial("PP") + 0.5 * OP::monomial("QQ") + OP::constant(-0.5);
      return OP::constant(number_coeffs_[0]) + number_coeffs_[1] * n +
             number_coeffs_[2] * (n * n);
    }
  }
  throw UnsupportedError("unknown Hamiltonian kind");
}

HermitianOperator HamiltonianSpec::matrix(std::size_t dim) const {
  if (kind_ == Kind::number_poly) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
      const double x = static_cast<double>(n);
      m(static_cast<Index>(n), static_cast<Index>(n)) =
          number_coeffs_[0] + number_coeffs_[1] * x + number_coeffs_[2] * x * x;
    }
    return HermitianOperator(ComplexMatrix(std::move(m)));
  }
  return HermitianOperator(polynomial().matrix(dim));
}

}  // namespace phasebound
