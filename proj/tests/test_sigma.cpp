#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/sigma.hpp"

using namespace phasebound;

namespace {

std::vector<SigmaState> sample_states() {
  return {SigmaState::fock_projector(0, 64), SigmaState::fock_projector(3, 64),
          SigmaState::from_diagonal({0.5, 0.5}, 64), SigmaState::from_diagonal({0.25, 0.5, 0.25}, 64),
          SigmaState::squeezed_vacuum(2.0, 64)};
}

}  // namespace

TEST_CASE("diagonal states") {
  const auto vac = SigmaState::from_diagonal({1.0}, 16);
  CHECK(vac.rho()(0, 0) == cplx(1.0));
  const auto mix = SigmaState::from_diagonal({0.5, 0.5}, 16);
  CHECK(mix.nbar() == doctest::Approx(0.5));
  CHECK(mix.n2bar() == doctest::Approx(0.5));
  CHECK_THROWS_AS(SigmaState::from_diagonal({0.3, 0.8}, 16), DomainError);
  CHECK_THROWS_AS(SigmaState::from_diagonal({1.5, -0.5}, 16), DomainError);
  CHECK_THROWS_AS(SigmaState::from_diagonal(std::vector<double>(17, 1.0 / 17), 16), DimensionError);
}

TEST_CASE("fock projectors") {
  const auto s3 = SigmaState::fock_projector(3, 16);
  CHECK(s3.nbar() == doctest::Approx(3.0));
  CHECK(s3.n2bar() == doctest::Approx(9.0));
  CHECK(s3.describe() == "fock:3");
  CHECK_THROWS_AS(SigmaState::fock_projector(16, 16), DimensionError);
}

TEST_CASE("squeezed vacuum") {
  const auto one = SigmaState::squeezed_vacuum(1.0, 64);
  CHECK(std::norm(one.rho()(0, 0)) >= 1 - 1e-10);
  CHECK(one.rho().max_abs_diff(SigmaState::fock_projector(0, 64).rho()) < 1e-9);
  const auto two = SigmaState::squeezed_vacuum(2.0, 64);
  const auto m = moments(two);
  CHECK(std::abs(m.delta_q() - 0.25) < 1e-8);
  CHECK(std::abs(m.delta_p() - 1.0) < 1e-8);
  CHECK_THROWS_AS(SigmaState::squeezed_vacuum(0.0, 64), DomainError);
  CHECK_THROWS_AS(SigmaState::squeezed_vacuum(30.0, 32), TruncationError);
}

TEST_CASE("custom states are validated") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;
  rho(0, 1) = 0.5;
  rho(1, 0) = 0.5;
  const auto s = SigmaState::custom(ComplexMatrix(rho));
  CHECK(s.factor_weights().size() == 1);
  rho(0, 1) = rho(1, 0) = 0.9;
  CHECK_THROWS_AS(SigmaState::custom(ComplexMatrix(rho)), DomainError);
  rho(0, 1) = rho(1, 0) = 0.0;
  rho(1, 1) = 0.7;
  CHECK_THROWS_AS(SigmaState::custom(ComplexMatrix(rho)), DomainError);
}

TEST_CASE("moments of reference states") {
  const auto vac = moments(SigmaState::fock_projector(0, 32));
  CHECK(std::abs(vac.q2() - 0.5) < 1e-12);
  CHECK(std::abs(vac.p2() - 0.5) < 1e-12);
  CHECK(std::abs(vac.q4() - 0.75) < 1e-12);
  CHECK(std::abs(vac.p4() - 0.75) < 1e-12);
  CHECK(std::abs(vac.qbar()) < 1e-14);
  CHECK(std::abs(vac.q3()) < 1e-14);
  CHECK(std::abs(vac.qp() - cplx(0, 0.5)) < 1e-12);
  CHECK(std::abs(vac.pq() - cplx(0, -0.5)) < 1e-12);
  const auto f3 = moments(SigmaState::fock_projector(3, 32));
  CHECK(std::abs(f3.q2() - 3.5) < 1e-12);
  CHECK_THROWS_AS(moments(SigmaState::fock_projector(20, 32)), TruncationError);
}

TEST_CASE("moment invariants for every sample state") {
  for (const auto& s : sample_states()) {
    const auto m = moments(s);
    CAPTURE(s.describe());
    CHECK(m.delta_q() * m.delta_p() >= 0.25 - 1e-9);
    CHECK(std::abs(m.pq() - std::conj(m.qp())) < 1e-12);
    CHECK(std::abs(m.q2p2() - std::conj(m.p2q2())) < 1e-12);
    CHECK(std::abs(m.qp() - m.pq() - cplx(0, 1)) < 1e-9);
    for (cplx v : {m.q2(), m.p2(), m.q4(), m.p4()}) {
      CHECK(std::abs(v.imag()) < 1e-12);
      CHECK(v.real() >= 0);
    }
    if (s.is_number_diagonal()) {
      const auto c = closed_form_constants(s.nbar(), s.n2bar());
      CHECK(std::abs(m.q2() - c.c2) < 1e-8);
      CHECK(std::abs(m.p2() - c.c2) < 1e-8);
      CHECK(std::abs(m.q4() - c.c4) < 1e-8);
      CHECK(std::abs(m.p4() - c.c4) < 1e-8);
      CHECK(m.max_odd_moment() < 1e-10);
      CHECK(std::abs((m.qp() + m.pq()).real()) < 1e-10);
      // Q^2 P^2 averages to C22 - 1/2 for sigma(N): the ordered product
      // carries the commutator term that the symmetrised C22 drops.
      CHECK(std::abs(m.q2p2().real() - (c.c22 - 0.5)) < 1e-8);
    }
  }
}

TEST_CASE("closed form constants") {
  const auto c0 = closed_form_constants(0, 0);
  CHECK(c0.c2 == 0.5);
  CHECK(c0.c22 == 0.25);
  CHECK(c0.c4 == 0.75);
  const auto c3 = closed_form_constants(3, 9);
  CHECK(c3.c2 == 3.5);
  CHECK(c3.c22 == 6.25);
  CHECK(c3.c4 == 18.75);
  CHECK_THROWS_AS(closed_form_constants(1, 0), DomainError);
  for (const auto& c : {c0, c3}) {
    CHECK(c.c2 >= 0.5);
    CHECK(c.c4 >= c.c2 * c.c2);
    CHECK(c.c4 >= c.c22);
  }
}

TEST_CASE("frame kernel normalisations") {
  const auto basis = number_basis(64);
  const auto vac = SigmaState::fock_projector(0, 64);
  for (auto [p, q] : {std::pair{0.0, 0.0}, std::pair{1.0, -0.5}, std::pair{-1.5, 2.0}}) {
    CHECK(frame_kernel(vac, basis, p, q, 0) ==
          doctest::Approx(std::exp(-(p * p + q * q) / 2)).epsilon(1e-12));
  }
  for (const auto& s : sample_states()) {
    CAPTURE(s.describe());
    for (auto [p, q] : {std::pair{0.0, 0.0}, std::pair{0.5, 1.0}, std::pair{-1.0, -1.0}}) {
      double sum = 0;
      for (std::size_t r = 0; r < 32; ++r) sum += frame_kernel(s, basis, p, q, r);
      CHECK(std::abs(sum - 1.0) < 1e-6);
    }
    for (std::size_t r : {0u, 1u, 2u}) {
      const double integral =
          integrate_disc([&](double p, double q) { return frame_kernel(s, basis, p, q, r); }, 12.0,
                         6, 32, 64, 0.0) /
          (2 * std::numbers::pi);
      CHECK(std::abs(integral - 1.0) < 1e-6);
    }
  }
  CHECK_THROWS_AS(frame_kernel(vac, basis, 0, 0, 64), DimensionError);
}

TEST_CASE("Weyl characteristic function") {
  const auto vac = SigmaState::fock_projector(0, 64);
  CHECK_FALSE(check_weyl_nonvanishing(vac, PhaseGrid{}).has_zeros());
  const auto mix = SigmaState::from_diagonal({0.5, 0.5}, 64);
  CHECK(std::abs(weyl_characteristic(mix, 0, 0) - 1.0) < 1e-12);
  // |3><3|: Tr(U sigma) = exp(-s/4) L_3(s/2) vanishes on three circles.
  const auto r3 = check_weyl_nonvanishing(SigmaState::fock_projector(3, 64), PhaseGrid{});
  CHECK(r3.has_zeros());
  CHECK(std::abs(weyl_characteristic(SigmaState::fock_projector(3, 64), 0, 0) - 1.0) < 1e-12);
}
