#pragma once

// Classical oscillator, quantum atom. The oscillator follows its free
// trajectory from thermally distributed initial conditions; the atom picks
// up the σ_z-conditional phase φ(t) = χ ∫ x_c dt, and the thermal average of
// e^{2iφ} sets the atomic coherence.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "revival/atom.hpp"
#include "revival/errors.hpp"
#include "revival/parallel.hpp"
#include "revival/params.hpp"
#include "revival/phase.hpp"
#include "revival/rng.hpp"

namespace revival::semiclassical {

/// Initial oscillator phase-space point.
struct OscillatorSample {
  double x0 = 0.0;  // m
  double p0 = 0.0;  // kg m/s
};

/// x_c(t) = x₀ cos ωt + p₀ sin ωt / (Mω).
inline double classical_trajectory(const OscillatorSample& s, PhaseAngle phase,
                                   const DimensionlessParams& dp) {
  const double wt = phase.value();
  return s.x0 * std::cos(wt) + s.p0 * std::sin(wt) / (dp.oscillator_mass * dp.omega);
}

/// φ = (χ/ω)[x₀ sin ωt + (p₀/Mω)(1 − cos ωt)].
inline double accumulated_phase(const OscillatorSample& s, PhaseAngle phase,
                                const DimensionlessParams& dp) {
  const double wt = phase.value();
  // 1 − cos ωt written as 2 sin²(ωt/2) to keep precision near revivals.
  const double one_minus_cos = 2.0 * phase.half_sin_squared();
  return (dp.chi / dp.omega) *
         (s.x0 * std::sin(wt) + s.p0 / (dp.oscillator_mass * dp.omega) * one_minus_cos);
}

/// The `index`-th draw of the thermal phase-space distribution for `seed`.
inline OscillatorSample thermal_sample(const DimensionlessParams& dp, std::uint64_t seed,
                                       std::uint64_t index) {
  const auto [zx, zp] = CounterRng(seed).normal_pair(index);
  return {dp.sigma_x * zx, dp.sigma_p * zp};
}

/// `count` i.i.d. samples from the zero-mean Gaussian with widths
/// (σ_x, σ_p). Sample i depends only on (seed, i).
inline std::vector<OscillatorSample> sample_thermal(const DimensionlessParams& dp,
                                                    std::uint64_t seed, std::size_t count) {
  if (count < 1) throw InvalidParams("sample_thermal: count must be at least 1");
  std::vector<OscillatorSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(thermal_sample(dp, seed, i));
  return out;
}

/// Monte Carlo estimate of the atomic coherence.
struct CoherenceEstimate {
  cplx coherence;
  /// Standard error of the complex mean, sqrt((Var Re + Var Im)/N).
  double stderr_coherence = 0.0;
  std::size_t samples = 0;

  [[nodiscard]] double visibility() const { return 2.0 * std::abs(coherence); }
  [[nodiscard]] double visibility_stderr() const { return 2.0 * stderr_coherence; }
};

/// Samples per deterministic accumulation block.
inline constexpr std::size_t kMcChunk = 4096;

/// Sample mean of ½e^{2iφ} over `n_samples` thermal realizations. The result
/// is bit-identical for a given (seed, n_samples) whatever `workers` is:
/// samples are summed in fixed-size chunks, and chunk sums are merged in
/// chunk order.
inline CoherenceEstimate mc_coherence(const DimensionlessParams& dp, PhaseAngle phase,
                                      std::size_t n_samples, std::uint64_t seed,
                                      unsigned workers = 1) {
  if (n_samples < 100) throw InvalidParams("mc_coherence: need at least 100 samples");

  struct Partial {
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
  };
  const std::size_t chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<Partial> partials(chunks);

  parallel_for(chunks, workers, [&](std::size_t k) {
    Partial acc;
    const std::size_t begin = k * kMcChunk;
    const std::size_t end = std::min(n_samples, begin + kMcChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const double phi = accumulated_phase(thermal_sample(dp, seed, i), phase, dp);
      const double re = 0.5 * std::cos(2.0 * phi);
      const double im = 0.5 * std::sin(2.0 * phi);
      acc.re += re;
      acc.im += im;
      acc.re2 += re * re;
      acc.im2 += im * im;
    }
    partials[k] = acc;
  });

  Partial total;
  for (const auto& p : partials) {
    total.re += p.re;
    total.im += p.im;
    total.re2 += p.re2;
    total.im2 += p.im2;
  }
  const auto n = static_cast<double>(n_samples);
  const double mean_re = total.re / n;
  const double mean_im = total.im / n;
  const double var_re = std::max(0.0, total.re2 / n - mean_re * mean_re) * n / (n - 1.0);
  const double var_im = std::max(0.0, total.im2 / n - mean_im * mean_im) * n / (n - 1.0);

  CoherenceEstimate est;
  est.coherence = {mean_re, mean_im};
  est.stderr_coherence = std::sqrt((var_re + var_im) / n);
  est.samples = n_samples;
  return est;
}

/// Exponent 8λ²·2n̄·sin²(ωt/2) of the classical-model visibility.
inline double analytic_exponent(double lambda, double nbar, PhaseAngle phase) {
  return 16.0 * lambda * lambda * nbar * phase.half_sin_squared();
}

/// Closed-form thermal average: c = ½ exp[−8λ²·2n̄·sin²(ωt/2)], real and
/// positive.
inline cplx analytic_coherence(const DimensionlessParams& dp, PhaseAngle phase) {
  return {0.5 * std::exp(-analytic_exponent(dp.lambda, dp.nbar, phase)), 0.0};
}

inline double analytic_visibility(const DimensionlessParams& dp, PhaseAngle phase) {
  return 2.0 * std::abs(analytic_coherence(dp, phase));
}

/// Thermally averaged atom state at the given phase.
inline AtomState averaged_atom_state(const DimensionlessParams& dp, PhaseAngle phase) {
  return AtomState::from_coherence(analytic_coherence(dp, phase));
}

}  // namespace revival::semiclassical
