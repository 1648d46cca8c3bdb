#pragma once

// Pointwise evaluation of every engine over a grid of ωt, and the
// closed-form headline numbers in the experimentally relevant regime.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "revival/entanglement.hpp"
#include "revival/fock.hpp"
#include "revival/parallel.hpp"
#include "revival/params.hpp"
#include "revival/phase.hpp"
#include "revival/quantum.hpp"
#include "revival/semiclassical.hpp"
#include "revival/separable.hpp"

namespace revival::analysis {

struct EngineSet {
  bool semiclassical = true;
  bool quantum_analytic = true;
  bool quantum_numeric = true;
  bool monte_carlo = true;
  bool negativity = true;
  bool entropy = false;
  bool weight_separable = true;
};

struct CompareOptions {
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 1;
  /// 0 selects the dimension automatically.
  int dim_override = 0;
  double tail_tolerance = 1e-10;
  unsigned workers = 1;
};

struct VisibilityRecord {
  double omega_t = 0.0;
  std::optional<double> v_semiclassical;
  std::optional<double> v_quantum_analytic;
  std::optional<double> v_quantum_numeric;
  std::optional<double> v_mc;
  std::optional<double> v_mc_stderr;
  std::optional<double> negativity;
  std::optional<double> entropy;
  std::optional<double> weight_separable;
  /// Phase of the numerically evolved coherence, radians.
  std::optional<double> coherence_phase;
  /// Trace drift of the numerically evolved state.
  std::optional<double> trace_drift;
  /// `engine:reason` entries separated by ';' for engines that failed here.
  std::string flags;

  void flag(const std::string& engine, const std::string& reason) {
    if (!flags.empty()) flags += ';';
    flags += engine + ":" + reason;
  }
};

struct CurveDiagnostics {
  int dim = 0;
  double tail_mass = 0.0;
  double max_trace_drift = 0.0;
  /// Largest |V_quantum/V_semiclassical − exp[−8λ² sin²(ωt/2)]| seen.
  double max_oracle_ratio_error = 0.0;
  std::size_t failed_points = 0;
  /// Engines that failed on every grid point.
  std::vector<std::string> engines_failed_everywhere;
  /// Message from building the numeric engine, if that failed.
  std::string setup_error;
};

struct VisibilityCurve {
  std::vector<VisibilityRecord> records;
  CurveDiagnostics diagnostics;
};

/// Uniform grid of `steps` points from `start` to `stop` inclusive.
inline std::vector<PhaseAngle> phase_grid(double start, double stop, std::size_t steps) {
  if (steps < 2) throw InvalidParams("phase_grid: need at least 2 steps");
  std::vector<PhaseAngle> grid;
  grid.reserve(steps);
  const double h = (stop - start) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    grid.emplace_back(i + 1 == steps ? stop : start + h * static_cast<double>(i));
  }
  return grid;
}

/// Dimension the numeric engine will use for these parameters.
inline int numeric_dim(const DimensionlessParams& dp, const CompareOptions& opts) {
  if (opts.dim_override > 0) return opts.dim_override;
  return fock::required_dim(dp.nbar, 0.0, dp.lambda, opts.tail_tolerance);
}

/// Ratio V_quantum/V_semiclassical predicted by the two closed forms.
inline double oracle_ratio(double lambda, PhaseAngle phase) {
  return std::exp(-8.0 * lambda * lambda * phase.half_sin_squared());
}

/// Evaluates every enabled engine at every grid point. An engine that throws
/// at a point leaves its column empty there and records a flag; the sweep
/// continues.
inline VisibilityCurve compare_models(const std::vector<PhaseAngle>& grid,
                                      const DimensionlessParams& dp, const EngineSet& engines,
                                      const CompareOptions& opts = {}) {
  VisibilityCurve curve;
  curve.records.resize(grid.size());

  const bool need_state = engines.quantum_numeric || engines.negativity || engines.entropy;
  std::optional<quantum::ConditionalEvolution> evolution;
  std::optional<quantum::JointState> initial;
  if (need_state) {
    try {
      const fock::FockSpace space(numeric_dim(dp, opts), opts.tail_tolerance);
      curve.diagnostics.dim = space.dim;
      curve.diagnostics.tail_mass = fock::thermal_tail_mass(dp.nbar, space.dim);
      initial = quantum::thermal_initial_state(dp.nbar, space);
      evolution.emplace(dp.lambda, space);
    } catch (const Error& e) {
      curve.diagnostics.setup_error = e.what();
    }
  }

  parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
    const PhaseAngle phase = grid[i];
    VisibilityRecord& rec = curve.records[i];
    rec.omega_t = phase.value();

    if (engines.semiclassical) rec.v_semiclassical = semiclassical::analytic_visibility(dp, phase);
    if (engines.quantum_analytic) {
      rec.v_quantum_analytic = 2.0 * std::abs(quantum::quantum_coherence_oracle(dp.lambda, dp.nbar, phase));
    }
    if (engines.weight_separable) rec.weight_separable = separable_weight(dp.lambda, phase);

    if (engines.monte_carlo) {
      try {
        const auto est = semiclassical::mc_coherence(dp, phase, opts.mc_samples, opts.seed);
        rec.v_mc = est.visibility();
        rec.v_mc_stderr = est.visibility_stderr();
      } catch (const Error&) {
        rec.flag("mc", "error");
      }
    }

    if (need_state) {
      if (!evolution) {
        if (engines.quantum_numeric) rec.flag("quantum_numeric", "setup");
        if (engines.negativity) rec.flag("negativity", "setup");
        if (engines.entropy) rec.flag("entropy", "setup");
      } else {
        try {
          const quantum::JointState state = evolution->apply(*initial, phase);
          const cplx c = quantum::reduced_atom(state).coherence();
          const double drift = std::abs(state.trace() - 1.0);
          rec.trace_drift = drift;
          if (engines.quantum_numeric) {
            rec.v_quantum_numeric = 2.0 * std::abs(c);
            rec.coherence_phase = std::arg(c);
          }
          if (engines.negativity) rec.negativity = negativity(state);
          if (engines.entropy) {
            try {
              rec.entropy = entanglement_entropy_pure(state);
            } catch (const PurityGuard&) {
              rec.flag("entropy", "mixed_state");
            }
          }
        } catch (const Error&) {
          if (engines.quantum_numeric) rec.flag("quantum_numeric", "error");
          if (engines.negativity) rec.flag("negativity", "error");
          if (engines.entropy) rec.flag("entropy", "error");
        }
      }
    }
  });

  // Diagnostics, merged in grid order.
  struct Tally {
    const char* name;
    bool enabled;
    std::size_t failures = 0;
  };
  std::vector<Tally> tallies = {{"mc", engines.monte_carlo},
                                {"quantum_numeric", engines.quantum_numeric},
                                {"negativity", engines.negativity},
                                {"entropy", engines.entropy}};
  for (const auto& rec : curve.records) {
    if (!rec.flags.empty()) ++curve.diagnostics.failed_points;
    if (rec.trace_drift) {
      curve.diagnostics.max_trace_drift = std::max(curve.diagnostics.max_trace_drift, *rec.trace_drift);
    }
    if (rec.v_quantum_analytic && rec.v_semiclassical && *rec.v_semiclassical > 0.0) {
      const double err = std::abs(*rec.v_quantum_analytic / *rec.v_semiclassical -
                                  oracle_ratio(dp.lambda, PhaseAngle(rec.omega_t)));
      curve.diagnostics.max_oracle_ratio_error = std::max(curve.diagnostics.max_oracle_ratio_error, err);
    }
    for (auto& t : tallies) {
      if (t.enabled && rec.flags.find(std::string(t.name) + ":") != std::string::npos) ++t.failures;
    }
  }
  for (const auto& t : tallies) {
    if (t.enabled && !grid.empty() && t.failures == grid.size()) {
      curve.diagnostics.engines_failed_everywhere.emplace_back(t.name);
    }
  }
  return curve;
}

/// log(1 − e^{−x}) for x ≥ 0 without forming 1 − e^{−x} when x is tiny.
inline double log_dip(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (x < 1e-4) return std::log(x) + std::log1p(-0.5 * x + x * x / 6.0);
  return std::log(-std::expm1(-x));
}

/// Visibility dip 1 − V at half period, evaluated through log_dip.
struct HeadlineReport {
  double lambda = 0.0;
  double nbar = 0.0;
  double dip_ground = 0.0;                 // quantum, n̄ = 0
  double dip_thermal_quantum = 0.0;        // quantum, (2n̄+1)
  double dip_thermal_semiclassical = 0.0;  // classical, 2n̄
  double log10_dip_ground = 0.0;
  double log10_dip_thermal_quantum = 0.0;
  double log10_dip_thermal_semiclassical = 0.0;
  /// Thermal quantum dip against the reference value it is compared with.
  double reference_thermal = 1e-10;
  double residual_factor = 0.0;
};

inline HeadlineReport headline_check(double lambda, double nbar, double reference_thermal = 1e-10) {
  HeadlineReport r;
  r.lambda = lambda;
  r.nbar = nbar;
  r.reference_thermal = reference_thermal;
  // Exponents at ωt = π: 8λ² (ground), 8λ²(2n̄+1) (quantum), 16λ²n̄ (classical). They are formed as
  // logs so that λ ~ 1e-13 never squares into the subnormal range.
  const double log_base = std::log(8.0) + 2.0 * std::log(lambda);
  auto dip_from_log_exponent = [](double log_x) {
    const double x = std::exp(log_x);
    return log_dip(x) / std::log(10.0);
  };
  r.log10_dip_ground = dip_from_log_exponent(log_base);
  r.log10_dip_thermal_quantum = dip_from_log_exponent(log_base + std::log(2.0 * nbar + 1.0));
  r.log10_dip_thermal_semiclassical =
      nbar > 0.0 ? dip_from_log_exponent(log_base + std::log(2.0 * nbar))
                 : -std::numeric_limits<double>::infinity();
  r.dip_ground = std::pow(10.0, r.log10_dip_ground);
  r.dip_thermal_quantum = std::pow(10.0, r.log10_dip_thermal_quantum);
  r.dip_thermal_semiclassical = std::pow(10.0, r.log10_dip_thermal_semiclassical);
  r.residual_factor = std::pow(10.0, r.log10_dip_thermal_quantum - std::log10(reference_thermal));
  return r;
}

}  // namespace revival::analysis
