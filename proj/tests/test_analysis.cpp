#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"

#include "revival/compare.hpp"
#include "revival/entanglement.hpp"
#include "revival/separable.hpp"

using namespace revival;
using namespace revival::analysis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double pi = std::numbers::pi;

namespace {

quantum::JointState evolved(double lambda, double nbar, double wt, const FockSpace& space) {
  return quantum::ConditionalEvolution(lambda, space).apply(quantum::thermal_initial_state(nbar, space), PhaseAngle(wt));
}

}  // namespace

TEST_CASE("negativity of a pure state matches its Schmidt coefficients", "[analysis]") {
  const double lambda = 0.05;
  const FockSpace space(32);
  for (double wt : {0.7, pi, 4.0}) {
    const auto state = evolved(lambda, 0.0, wt, space);
    const double ov = std::exp(-8.0 * lambda * lambda * PhaseAngle(wt).half_sin_squared());
    const double p1 = 0.5 * (1.0 + ov), p2 = 0.5 * (1.0 - ov);
    CHECK_THAT(negativity(state), WithinRel(std::sqrt(p1 * p2), 1e-8));
    Eigen::VectorXd p(2);
    p << p1, p2;
    CHECK_THAT(entanglement_entropy_pure(state), WithinRel(shannon_entropy(p), 1e-8));
  }
}

TEST_CASE("product states have zero negativity", "[analysis]") {
  const FockSpace space(fock::required_dim(2.0, 0.0, 0.0));
  const auto product = quantum::thermal_initial_state(2.0, space);
  CHECK(negativity(product) == 0.0);
  CHECK_THROWS_AS(entanglement_entropy_pure(product), PurityGuard);
}

TEST_CASE("partial transpose preserves the trace", "[analysis]") {
  const FockSpace space(50);
  const auto state = evolved(0.2, 1.0, 2.0, space);
  const auto mu = partial_transpose_spectrum(state);
  CHECK_THAT(mu.sum(), WithinAbs(1.0, 1e-9));
  CHECK(negativity(state) > 0.0);
}

TEST_CASE("Gauss-Laguerre integrates polynomials exactly", "[analysis]") {
  const auto [x, w] = gauss_laguerre(12);
  double m0 = 0.0, m3 = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m3 += w[i] * x[i] * x[i] * x[i];
  }
  CHECK_THAT(m0, WithinAbs(1.0, 1e-13));
  CHECK_THAT(m3, WithinRel(6.0, 1e-12));
}

TEST_CASE("separable component reproduces the semiclassical coherence", "[analysis]") {
  const double lambda = 0.05, nbar = 4.0;
  const FockSpace space(fock::required_dim(nbar, 0.0, lambda));
  const PhaseAngle phase(pi);
  const double c_sc = 0.5 * std::exp(-16.0 * lambda * lambda * nbar);

  SeparableOptions quad;
  quad.rule = MixtureRule::quadrature;
  const auto q = build_separable_component(nbar, lambda, phase, space, quad);
  CHECK_THAT(q.coherence.real(), WithinAbs(c_sc, 1e-10));
  CHECK_THAT(q.rho0.trace(), WithinAbs(1.0, 1e-8));
  CHECK(negativity(q.rho0) == 0.0);

  SeparableOptions mc;
  mc.mc_samples = 20000;
  const auto m = build_separable_component(nbar, lambda, phase, space, mc);
  CHECK(std::abs(m.coherence - cplx(c_sc)) <= 4.0 * m.stderr_coherence);
  CHECK(negativity(m.rho0) == 0.0);
}

TEST_CASE("decomposition identities", "[analysis]") {
  const double lambda = 0.1, nbar = 2.0;
  const FockSpace space(fock::required_dim(nbar, 0.0, lambda));
  SeparableOptions quad;
  quad.rule = MixtureRule::quadrature;
  const PhaseAngle phase(2.0);
  const auto full = evolved(lambda, nbar, phase.value(), space);
  const auto r = decompose(full, nbar, lambda, phase, space, quad);
  const double w = separable_weight(lambda, phase);
  CHECK_THAT(r.weight_separable, WithinRel(w, 1e-15));
  CHECK_THAT(r.weight_separable + r.residual_weight, WithinAbs(1.0, 1e-15));
  CHECK_THAT(r.trace_residual, WithinAbs(1.0, 1e-7));
  // c = w c⁽⁰⁾ + (1 − w) c⁽¹⁾.
  const cplx recombined = r.weight_separable * r.coherence_sep + r.residual_weight * r.coherence_residual;
  CHECK_THAT(std::abs(recombined - r.coherence_full), WithinAbs(0.0, 1e-12));
  CHECK(std::abs(r.coherence_full - w * r.coherence_sep) <= 0.5 * r.residual_weight + 1e-12);
  CHECK(r.trace_distance_to_separable <= std::sqrt(r.residual_weight) + 1e-9);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("decomposition at a revival is degenerate", "[analysis]") {
  const FockSpace space(48);
  const auto phase = PhaseAngle::periods(1);
  const auto full = evolved(0.1, 1.0, phase.value(), space);
  SeparableOptions quad;
  quad.rule = MixtureRule::quadrature;
  const auto r = decompose(full, 1.0, 0.1, phase, space, quad);
  CHECK(r.degenerate);
  CHECK(r.weight_separable == 1.0);
  CHECK(std::isnan(r.trace_residual));
  CHECK_THROWS_AS(residual_component(full, full, 1.0), DegenerateWeight);
}

TEST_CASE("compare_models fills every enabled column", "[analysis]") {
  const auto dp = natural_units(0.1, 1.0);
  CompareOptions opts;
  opts.mc_samples = 5000;
  EngineSet engines;
  const auto grid = phase_grid(0.0, 2.0 * pi, 9);
  const auto curve = compare_models(grid, dp, engines, opts);
  REQUIRE(curve.records.size() == 9);
  for (const auto& r : curve.records) {
    CHECK(r.v_semiclassical);
    CHECK(r.v_quantum_analytic);
    CHECK(r.v_quantum_numeric);
    CHECK(r.v_mc);
    CHECK(r.negativity);
    CHECK_FALSE(r.entropy);
    CHECK(r.flags.empty());
  }
  CHECK(curve.diagnostics.max_oracle_ratio_error < 1e-14);
  CHECK(curve.diagnostics.engines_failed_everywhere.empty());
  CHECK(phase_grid(0.0, 1.0, 3)[2] == PhaseAngle(1.0));
  CHECK_THROWS_AS(phase_grid(0.0, 1.0, 1), InvalidParams);
}

TEST_CASE("compare_models flags failures instead of aborting", "[analysis]") {
  const auto dp = natural_units(0.1, 4.0);
  CompareOptions opts;
  opts.dim_override = 10;  // far too small for n̄ = 4
  EngineSet engines;
  engines.monte_carlo = false;
  engines.entropy = true;
  const auto curve = compare_models(phase_grid(0.0, pi, 4), dp, engines, opts);
  CHECK_FALSE(curve.diagnostics.setup_error.empty());
  CHECK(curve.diagnostics.failed_points == 4);
  CHECK(curve.diagnostics.engines_failed_everywhere.size() == 3);
  for (const auto& r : curve.records) {
    CHECK(r.v_semiclassical);
    CHECK_FALSE(r.v_quantum_numeric);
  }
}

TEST_CASE("entropy on mixed states is flagged", "[analysis]") {
  EngineSet engines;
  engines.monte_carlo = false;
  engines.entropy = true;
  const auto curve = compare_models(phase_grid(0.5, 1.0, 2), natural_units(0.1, 1.0), engines);
  CHECK(curve.records[0].flags == "entropy:mixed_state");
}

TEST_CASE("log-space dip", "[analysis]") {
  CHECK_THAT(log_dip(1e-24), WithinRel(std::log(1e-24), 1e-12));
  CHECK_THAT(log_dip(2.0), WithinRel(std::log(1.0 - std::exp(-2.0)), 1e-14));
  const auto h = headline_check(2.5e-13, 1e15);
  CHECK_THAT(h.dip_ground, WithinRel(5e-25, 1e-10));
  CHECK_THAT(h.dip_thermal_quantum, WithinRel(1e-9, 1e-6));
  CHECK_THAT(h.dip_thermal_semiclassical, WithinRel(1e-9, 1e-6));
  CHECK_THAT(h.residual_factor, WithinRel(10.0, 1e-6));
  // Matches the closed forms where they are still representable.
  const auto d = headline_check(0.01, 3.0);
  CHECK_THAT(d.dip_thermal_quantum, WithinRel(1.0 - std::exp(-8e-4 * 7.0), 1e-12));
  CHECK_THAT(d.dip_ground, WithinRel(1.0 - std::exp(-8e-4), 1e-12));
}
