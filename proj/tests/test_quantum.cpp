#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"

#include "revival/quantum.hpp"

using namespace revival;
using namespace revival::quantum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double pi = std::numbers::pi;

TEST_CASE("closed form against frozen values", "[quantum]") {
  CHECK_THAT(2.0 * std::abs(quantum_coherence_oracle(0.1, 8.0, PhaseAngle(pi))), WithinRel(0.25666077695355588, 1e-14));
  CHECK_THAT(2.0 * std::abs(quantum_coherence_oracle(0.1, 0.0, PhaseAngle(pi))), WithinRel(0.92311634638663578, 1e-14));
}

TEST_CASE("conditional shift closes at the period", "[quantum]") {
  CHECK(std::abs(conditional_shift(0.2, PhaseAngle::periods(1))) < 1e-15);
  CHECK_THAT(std::abs(conditional_shift(0.2, PhaseAngle(pi))), WithinAbs(0.4, 1e-15));
}

TEST_CASE("numeric evolution matches the closed form", "[quantum]") {
  for (double nbar : {0.0, 1.0, 4.0}) {
    const double lambda = 0.15;
    const FockSpace space(fock::required_dim(nbar, 0.0, lambda));
    const ConditionalEvolution evo(lambda, space);
    const auto initial = thermal_initial_state(nbar, space);
    for (double wt : {0.3, 1.7, pi, 5.0}) {
      const auto state = evo.apply(initial, PhaseAngle(wt));
      const cplx c = reduced_atom(state).coherence();
      const cplx oracle = quantum_coherence_oracle(lambda, nbar, PhaseAngle(wt));
      CHECK_THAT(std::abs(c), WithinAbs(std::abs(oracle), 1e-9));
      CHECK_THAT(std::abs(evo.coherence(initial, PhaseAngle(wt)) - c), WithinAbs(0.0, 1e-13));
      CHECK_THAT(state.trace(), WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("evolution is unitary on each branch", "[quantum]") {
  const FockSpace space(48);
  const ConditionalEvolution evo(0.2, space);
  const auto initial = thermal_initial_state(1.0, space);
  const auto state = evo.apply(initial, PhaseAngle(2.2));
  CHECK_THAT(state.purity(), WithinAbs(initial.purity(), 1e-9));
  CHECK(state.is_physical(1e-9));
}

TEST_CASE("ground state evolution against a Schmidt oracle", "[quantum]") {
  // Branch states are coherent states |±(λ-shift)⟩ up to phases. The
  // evolved joint state stays pure and |⟨β₋|β₊⟩| = e^{−8λ² sin²(ωt/2)}.
  const double lambda = 0.2;
  const FockSpace space(40);
  const auto state = evolve(thermal_initial_state(0.0, space), PhaseAngle(pi), lambda);
  CHECK_THAT(state.purity(), WithinAbs(1.0, 1e-10));
  const double overlap = std::exp(-8.0 * lambda * lambda);
  CHECK_THAT(reduced_atom(state).visibility(), WithinRel(overlap, 1e-10));
}

TEST_CASE("coherent initial state leaves |c| independent of alpha", "[quantum]") {
  const FockSpace space(120);
  // ½e^{−2|δ|²} with |δ|² = 4λ² at ωt = π.
  const double expected = 0.5 * std::exp(-8.0 * 0.01);
  CHECK_THAT(expected, WithinRel(0.46155817319331789, 1e-14));
  for (double a : {0.0, 1.0, 2.5}) {
    const cplx c = coherent_initial_coherence(cplx(a, 0.5 * a), 0.1, PhaseAngle(pi), space);
    CHECK_THAT(std::abs(c), WithinAbs(expected, 1e-9));
  }
}

TEST_CASE("dimension mismatch is rejected", "[quantum]") {
  const ConditionalEvolution evo(0.1, FockSpace(32));
  CHECK_THROWS_AS(evo.apply(thermal_initial_state(0.0, FockSpace(40)), PhaseAngle(1.0)), InvalidParams);
  CHECK_THROWS_AS(ConditionalEvolution(3.0, FockSpace(8)), TailOverflow);
}
