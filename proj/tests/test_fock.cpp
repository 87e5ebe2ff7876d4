#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/laguerre.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "phasebound/errors.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/operators.hpp"

using namespace phasebound;
using Eigen::Index;

namespace {

// exp(i(pQ - qP)) at a generous dimension; only the leading block is used.
Eigen::MatrixXcd expm_displacement(std::size_t dim, double p, double q) {
  const auto qp = quadratures(dim);
  const Eigen::MatrixXcd gen =
      cplx(0, 1) * (p * qp.q.matrix().data() - q * qp.p.matrix().data());
  return gen.exp();
}

double factorial(unsigned n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("annihilation operator") {
  const auto a2 = annihilation(2);
  CHECK(a2(0, 1) == cplx(1, 0));
  CHECK(a2(1, 0) == cplx(0, 0));
  CHECK(std::abs(annihilation(3)(1, 2) - std::sqrt(2.0)) < 1e-15);
  const auto a = annihilation(8);
  const auto n = a.adjoint() * a;
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(n(i, i) - double(i)) < 1e-12);
  CHECK_THROWS_AS(annihilation(1), DimensionError);
}

TEST_CASE("quadratures satisfy the canonical relations") {
  const auto qp = quadratures(16);
  const auto& q = qp.q.matrix().data();
  const auto& p = qp.p.matrix().data();
  CHECK(std::abs((q * q)(0, 0) - 0.5) < 1e-14);
  const Eigen::MatrixXcd comm = q * p - p * q;
  double worst = 0;
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j)
      worst = std::max(worst, std::abs(comm(i, j) - (i == j ? cplx(0, 1) : cplx(0))));
  CHECK(worst < 1e-12);
  const Eigen::VectorXcd kill = (q + cplx(0, 1) * p).col(0);
  CHECK(kill.norm() < 1e-12);
}

TEST_CASE("laguerre polynomials") {
  CHECK(laguerre_assoc(0, 3, 1.7) == doctest::Approx(1.0));
  CHECK(laguerre_assoc(1, 0, 2.5) == doctest::Approx(-1.5));
  CHECK(laguerre_assoc(2, 1, 0.0) == doctest::Approx(3.0));
  for (unsigned n : {3u, 10u, 20u, 21u, 35u, 60u}) {
    for (unsigned m : {0u, 1u, 4u}) {
      for (double x : {0.1, 2.0, 7.5}) {
        const double ref = boost::math::laguerre(n, m, x);
        CHECK(laguerre_assoc(n, m, x) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
      }
    }
  }
  const auto seq = laguerre_sequence(30, 2, 3.3);
  for (unsigned n = 0; n <= 30; ++n) {
    CHECK(seq[n] == doctest::Approx(boost::math::laguerre(n, 2u, 3.3)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("displacement matrix: closed form against the matrix exponential") {
  const std::size_t big = 160;
  for (auto [p, q] : {std::pair{0.3, -0.4}, std::pair{1.2, 0.7}, std::pair{-2.0, 1.5}}) {
    const auto u = displacement_matrix(24, p, q);
    const auto ref = expm_displacement(big, p, q);
    double worst = 0;
    for (Index i = 0; i < 24; ++i)
      for (Index j = 0; j < 24; ++j) worst = std::max(worst, std::abs(u.data()(i, j) - ref(i, j)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("displacement matrix special entries") {
  const double p = 0.8;
  const double q = -1.1;
  const double s = p * p + q * q;
  const auto u = displacement_matrix(32, p, q);
  CHECK(std::abs(u(0, 0) - std::exp(-s / 4)) < 1e-14);
  for (unsigned n = 0; n < 10; ++n) {
    const double expect = std::exp(-s / 2) * std::pow(s, n) / (std::pow(2.0, n) * factorial(n));
    CHECK(std::norm(u(0, n)) == doctest::Approx(expect).epsilon(1e-12));
  }
  const auto id = displacement_matrix(16, 0, 0);
  CHECK(id.max_abs_diff(ComplexMatrix::identity(16)) < 1e-15);
}

TEST_CASE("displacement matrix: unitarity, conjugation rule and composition") {
  const std::size_t dim = 64;
  const std::size_t half = 24;  // rows that stay clear of the cutoff
  const double p = 1.3;
  const double q = 2.1;  // p^2 + q^2 <= dim/4
  const auto u = displacement_matrix(dim, p, q);
  const Eigen::MatrixXcd uu = u.data() * u.adjoint().data();
  CHECK((uu.topLeftCorner(half, half) - Eigen::MatrixXcd::Identity(half, half)).cwiseAbs().maxCoeff() <
        1e-8);

  // <n|U[p,q]|n'> = conj(<n'|U[-p,-q]|n>)
  const auto um = displacement_matrix(dim, -p, -q);
  double worst = 0;
  for (Index n = 0; n < Index(dim); ++n)
    for (Index m = 0; m < Index(dim); ++m)
      worst = std::max(worst, std::abs(u.data()(n, m) - std::conj(um.data()(m, n))));
  CHECK(worst < 1e-10);

  // U[p,q] U[p',q'] = phase * U[p+p', q+q']
  const double p2 = -0.4;
  const double q2 = 0.9;
  const Eigen::MatrixXcd prod = u.data() * displacement_matrix(dim, p2, q2).data();
  const auto sum = displacement_matrix(dim, p + p2, q + q2);
  const Index b = 16;
  const cplx phase = prod(0, 0) / sum.data()(0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-8);
  CHECK((prod.topLeftCorner(b, b) - phase * sum.data().topLeftCorner(b, b)).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("displace and displaced_number_state agree with the full matrix") {
  const std::size_t dim = 40;
  const auto u = displacement_matrix(dim, 0.7, -0.2);
  for (std::size_t n : {0u, 3u, 11u}) {
    const auto col = displaced_number_state(dim, 0.7, -0.2, n);
    CHECK((col - u.data().col(Index(n))).cwiseAbs().maxCoeff() < 1e-13);
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(dim);
  v.tail(10).setZero();
  CHECK((displace(v, 0.7, -0.2) - u.data() * v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian eigensolver") {
  const auto n8 = HamiltonianSpec::number_poly({0, 1, 0}).matrix(8);
  const auto e8 = hermitian_eigs(n8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(e8.eigenvalues[i] == doctest::Approx(double(i)));

  const auto h = HamiltonianSpec::harmonic().matrix(64);
  const auto e = hermitian_eigs(h);
  for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(e.eigenvalues[i] - (i + 0.5)) < 1e-8);
  const Eigen::MatrixXcd res =
      h.matrix().data() * e.eigenvectors.data() -
      e.eigenvectors.data() * Eigen::VectorXd::Map(e.eigenvalues.data(), 64).asDiagonal();
  CHECK(res.cwiseAbs().maxCoeff() < 1e-9 * h.matrix().max_abs());
  for (std::size_t i = 1; i < 64; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);

  const auto kerr = hermitian_eigs(HamiltonianSpec::kerr(1, 5).matrix(32));
  CHECK(kerr.eigenvalues[0] == doctest::Approx(-4.0));
  CHECK(std::abs(kerr.eigenvectors(3, 0)) == doctest::Approx(1.0));
}

TEST_CASE("hermiticity is enforced") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix(m)), DomainError);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ComplexMatrix{bad}, DomainError);
}

TEST_CASE("conjugation by displacement") {
  const std::size_t dim = 64;
  const auto id = conjugate_by_displacement(ComplexMatrix::identity(dim), 0.5, 0.5);
  CHECK(id.leading_block(16).max_abs_diff(ComplexMatrix::identity(16)) < 1e-8);

  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(dim, dim);
  vac(0, 0) = 1.0;
  const double p = 1.0;
  const double q = -0.5;
  const auto rho = conjugate_by_displacement(ComplexMatrix(vac), p, q);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
  CHECK((rho.data() * rho.data() - rho.data()).cwiseAbs().maxCoeff() < 1e-8);
  const auto h = HamiltonianSpec::harmonic().matrix(dim);
  const cplx e = (rho.data() * h.matrix().data()).trace();
  CHECK(e.real() == doctest::Approx((p * p + q * q + 1) / 2).epsilon(1e-12));
}

TEST_CASE("words and operator polynomials") {
  CHECK(words_up_to(2).size() == 6);
  CHECK_THROWS_AS(validate_word("QX"), DomainError);
  // (N-1)(N-5) = (P^4+Q^4+P^2Q^2+Q^2P^2)/4 - 7(P^2+Q^2)/2 + 33/4
  using OP = OperatorPolynomial;
  const OP quartic = 0.25 * (OP::monomial("PPPP") + OP::monomial("QQQQ") + OP::monomial("PPQQ") +
                             OP::monomial("QQPP")) +
                     (-3.5) * (OP::monomial("PP") + OP::monomial("QQ")) + OP::constant(8.25);
  const auto m = quartic.matrix(64);
  const auto diag = HamiltonianSpec::kerr(1, 5).matrix(64).matrix();
  CHECK(m.leading_block(32).max_abs_diff(diag.leading_block(32)) < 1e-9);
  // The exact truncation is exact everywhere for number polynomials.
  CHECK(HamiltonianSpec::kerr(1, 5).polynomial().matrix(64).max_abs_diff(diag) < 1e-9);
}

TEST_CASE("word expectations: dense and factorised forms agree") {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Random(12, 3);
  b.bottomRows(2).setZero();
  const std::vector<double> w = {0.2, 0.5, 0.3};
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(12, 12);
  for (Index l = 0; l < 3; ++l) rho += w[std::size_t(l)] * b.col(l) * b.col(l).adjoint();
  for (const auto& word : words_up_to(4)) {
    CHECK(std::abs(word_expectation(word, rho) - word_expectation(word, b, w)) < 1e-12);
  }
  CHECK_THROWS_AS(word_expectation("Q", b, {1.0}), DimensionError);
}
