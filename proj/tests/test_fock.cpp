#include <cmath>

#include "catch_amalgamated.hpp"

#include "revival/fock.hpp"

using namespace revival;
using namespace revival::fock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("thermal state moments", "[fock]") {
  for (double nbar : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const FockSpace space(required_dim(nbar, 0.0, 0.0));
    const auto rho = thermal_state(nbar, space);
    CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(rho.mean_occupation(), WithinAbs(nbar, 1e-8));
    CHECK_THAT(rho.purity(), WithinAbs(1.0 / (2.0 * nbar + 1.0), 1e-8));
    CHECK(rho.is_physical());
  }
}

TEST_CASE("thermal tail overflow is reported", "[fock]") {
  CHECK_THROWS_AS(thermal_state(8.0, FockSpace(40)), TailOverflow);
  try {
    thermal_state(8.0, FockSpace(40));
  } catch (const TailOverflow& e) {
    CHECK_THAT(e.tail_mass(), WithinRel(std::pow(8.0 / 9.0, 40), 1e-10));
  }
  CHECK_THROWS_AS(thermal_state(-1.0, FockSpace(40)), InvalidParams);
  CHECK_THROWS_AS(FockSpace(1), InvalidParams);
}

TEST_CASE("required dimension bounds the tails", "[fock]") {
  for (double nbar : {0.0, 1.0, 4.0, 8.0, 20.0}) {
    const int d = required_dim(nbar, 0.0, 0.3);
    CHECK(thermal_tail_mass(nbar, d) <= 1e-10);
  }
  CHECK(required_dim(0.0, 3.0, 0.1) >= 32);
  CHECK(coherent_tail_mass(9.0, required_dim(0.0, 3.0, 0.0) - 8) <= 1e-10);
}

TEST_CASE("coherent state amplitudes", "[fock]") {
  const FockSpace space(80);
  const std::complex<double> alpha(1.2, -0.7);
  const auto v = coherent_state(alpha, space);
  CHECK_THAT(v.amplitudes.norm(), WithinAbs(1.0, 1e-12));
  const auto a = annihilation(space.dim);
  const std::complex<double> mean = v.amplitudes.dot(a * v.amplitudes);
  CHECK_THAT(mean.real(), WithinAbs(alpha.real(), 1e-12));
  CHECK_THAT(mean.imag(), WithinAbs(alpha.imag(), 1e-12));
  CHECK_THROWS_AS(coherent_state(6.0, FockSpace(20)), TailOverflow);
}

TEST_CASE("displacement of the vacuum is a coherent state", "[fock]") {
  const FockSpace space(60);
  const std::complex<double> zeta(0.8, 0.4);
  const Eigen::MatrixXcd D = displacement(zeta, space);
  const Eigen::VectorXcd vac = Eigen::VectorXcd::Unit(space.dim, 0);
  const Eigen::VectorXcd out = D * vac;
  const auto expected = coherent_state(zeta, space);
  CHECK((out - expected.amplitudes).norm() < 1e-12);
  // D(ζ)D(−ζ) = 1 away from the truncation edge.
  const Eigen::MatrixXcd prod = displacement_matrix(zeta, space.dim) * displacement_matrix(-zeta, space.dim);
  CHECK((prod.topLeftCorner(30, 30) - Eigen::MatrixXcd::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("number operator diagonal", "[fock]") {
  const auto n = number_diagonal(5);
  CHECK(n[4] == 4.0);
  const auto a = annihilation(5);
  CHECK_THAT(std::abs(a(0, 1)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(std::abs(a(3, 4)), WithinAbs(2.0, 1e-15));
}
