#pragma once

// Separable part of the evolved thermal state.
//
// Writing each conditionally displaced coherent state as its overlap with
// the freely rotated |αe^{−iωt}⟩ plus an orthogonal remainder splits the
// evolved state exactly as
//
//   ρ(t) = e^{−|δ|²} ρ⁽⁰⁾(t) + (1 − e^{−|δ|²}) ρ⁽¹⁾(t),
//
// where ρ⁽⁰⁾ = ∫ P(α) |ψ₀⟩⟨ψ₀| ⊗ |αe^{−iωt}⟩⟨αe^{−iωt}| is a mixture of
// product states and |ψ₀⟩ carries the phase kick e^{±(α*δ* − αδ)}.
// ρ⁽⁰⁾ is realized as a finite positive-weight mixture of product states,
// either by Monte Carlo over the thermal P-function or by a polar
// Gauss-Laguerre × trapezoid rule. Both keep it separable by construction.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "revival/entanglement.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/phase.hpp"
#include "revival/quantum.hpp"
#include "revival/rng.hpp"

namespace revival::analysis {

using fock::FockSpace;

enum class MixtureRule { monte_carlo, quadrature };

struct SeparableOptions {
  MixtureRule rule = MixtureRule::monte_carlo;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 1;
  int radial_nodes = 64;
  int angular_nodes = 96;
  /// Largest tolerated trace lost to truncated coherent states.
  double max_trace_loss = 1e-8;
};

/// stderr(c⁽⁰⁾) above which the Monte Carlo estimate is flagged.
inline constexpr double kSeparableStderrWarning = 1e-3;

struct SeparableComponent {
  quantum::JointState rho0;
  cplx coherence;             // c⁽⁰⁾ = Tr ρ⁽⁰⁾_{+−}
  double stderr_coherence = 0.0;
  std::size_t terms = 0;      // product states in the mixture
  double trace_loss = 0.0;    // weight lost to truncation
  bool convergence_warning = false;
};

/// Gauss-Laguerre nodes and weights for ∫₀^∞ e^{−y} f(y) dy (Golub-Welsch).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_laguerre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = 2.0 * k + 1.0;
    if (k + 1 < n) jacobi(k, k + 1) = jacobi(k + 1, k) = k + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Eigen::VectorXd weights = es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), weights};
}

namespace detail {

// Unnormalized coherent amplitudes by recurrence; the caller accounts for
// the truncated tail.
inline void coherent_amplitudes(cplx gamma, const Eigen::VectorXd& inv_sqrt,
                                Eigen::Ref<Eigen::VectorXcd> out) {
  out[0] = std::exp(-0.5 * std::norm(gamma));
  for (Eigen::Index n = 1; n < out.size(); ++n) out[n] = out[n - 1] * gamma * inv_sqrt[n];
}

struct MixtureNode {
  cplx alpha;     // thermal amplitude before rotation
  double weight;  // probability weight
};

}  // namespace detail

/// Builds ρ⁽⁰⁾ for a thermal oscillator of occupation `nbar`.
inline SeparableComponent build_separable_component(double nbar, double lambda, PhaseAngle phase,
                                                    const FockSpace& space,
                                                    const SeparableOptions& opts = {}) {
  const int d = space.dim;
  const cplx delta = quantum::conditional_shift(lambda, phase);
  const cplx rotation = std::polar(1.0, -phase.value());

  std::vector<detail::MixtureNode> nodes;
  if (nbar == 0.0) {
    nodes.push_back({0.0, 1.0});
  } else if (opts.rule == MixtureRule::monte_carlo) {
    if (opts.mc_samples < 2) throw InvalidParams("build_separable_component: need at least 2 samples");
    const CounterRng rng(opts.seed);
    const double width = std::sqrt(0.5 * nbar);
    nodes.reserve(opts.mc_samples);
    const double w = 1.0 / static_cast<double>(opts.mc_samples);
    for (std::size_t i = 0; i < opts.mc_samples; ++i) {
      const auto [re, im] = rng.normal_pair(i, 1);
      nodes.push_back({{width * re, width * im}, w});
    }
  } else {
    const auto [y, wy] = gauss_laguerre(opts.radial_nodes);
    const double w_theta = 1.0 / opts.angular_nodes;
    for (int r = 0; r < opts.radial_nodes; ++r) {
      if (wy[r] < 1e-300) continue;
      const double radius = std::sqrt(nbar * y[r]);
      for (int k = 0; k < opts.angular_nodes; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) * w_theta;
        nodes.push_back({std::polar(radius, theta), wy[r] * w_theta});
      }
    }
  }

  Eigen::VectorXd inv_sqrt(d);
  inv_sqrt[0] = 0.0;
  for (int n = 1; n < d; ++n) inv_sqrt[n] = 1.0 / std::sqrt(static_cast<double>(n));

  // ρ⁽⁰⁾_{++} = ρ⁽⁰⁾_{−−} = ½ Σ w |γ⟩⟨γ| and ρ⁽⁰⁾_{+−} = ½ Σ w e^{2(α*δ* − αδ)} |γ⟩⟨γ|
  // with γ = αe^{−iωt}; accumulated in column blocks.
  Eigen::MatrixXcd diag_block = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd cross_block = Eigen::MatrixXcd::Zero(d, d);
  constexpr std::size_t kBlock = 512;
  Eigen::MatrixXcd vecs(d, kBlock);
  Eigen::MatrixXcd weighted(d, kBlock);
  Eigen::MatrixXcd kicked(d, kBlock);

  double trace_loss = 0.0;
  double sum_re = 0.0, sum_im = 0.0, sum_sq = 0.0, sum_w = 0.0;
  for (std::size_t begin = 0; begin < nodes.size(); begin += kBlock) {
    const std::size_t count = std::min(kBlock, nodes.size() - begin);
    for (std::size_t j = 0; j < count; ++j) {
      const auto& node = nodes[begin + j];
      const cplx gamma = node.alpha * rotation;
      detail::coherent_amplitudes(gamma, inv_sqrt, vecs.col(j));
      const double kept = vecs.col(j).squaredNorm();
      trace_loss += node.weight * std::max(0.0, 1.0 - kept);
      const cplx exponent = std::conj(node.alpha * delta) - node.alpha * delta;
      const cplx kick = std::exp(2.0 * exponent);
      weighted.col(j) = node.weight * vecs.col(j);
      kicked.col(j) = (node.weight * kick) * vecs.col(j);
      const cplx term = 0.5 * kick * kept;
      sum_re += node.weight * term.real();
      sum_im += node.weight * term.imag();
      sum_sq += node.weight * std::norm(term);
      sum_w += node.weight;
    }
    const auto n = static_cast<Eigen::Index>(count);
    diag_block.noalias() += weighted.leftCols(n) * vecs.leftCols(n).adjoint();
    cross_block.noalias() += kicked.leftCols(n) * vecs.leftCols(n).adjoint();
  }

  if (trace_loss > opts.max_trace_loss) {
    throw TailOverflow("build_separable_component: coherent-state mixture loses trace " +
                           std::to_string(trace_loss) + " at dim=" + std::to_string(d),
                       trace_loss);
  }

  SeparableComponent out;
  out.rho0.pp = 0.5 * diag_block;
  out.rho0.mm = out.rho0.pp;
  out.rho0.pm = 0.5 * cross_block;
  out.rho0.mp = out.rho0.pm.adjoint();
  out.coherence = out.rho0.pm.trace();
  out.terms = nodes.size();
  out.trace_loss = trace_loss;
  if (nbar > 0.0 && opts.rule == MixtureRule::monte_carlo) {
    const double n = static_cast<double>(nodes.size());
    const double mean_sq = std::norm(cplx(sum_re, sum_im) / sum_w);
    const double var = std::max(0.0, sum_sq / sum_w - mean_sq) * n / (n - 1.0);
    out.stderr_coherence = std::sqrt(var / n);
    out.convergence_warning = out.stderr_coherence > kSeparableStderrWarning;
  }
  return out;
}

/// Weight e^{−|δ|²} of the separable part.
inline double separable_weight(double lambda, PhaseAngle phase) {
  return std::exp(-std::norm(quantum::conditional_shift(lambda, phase)));
}

/// Below this |δ|², ρ⁽¹⁾ is treated as undefined.
inline constexpr double kDegenerateShift = 1e-14;

/// ρ⁽¹⁾ = (ρ − wρ⁽⁰⁾)/(1 − w). Throws DegenerateWeight when 1 − w vanishes.
/// `rest` may be passed explicitly when 1 − w is known more precisely.
inline quantum::JointState residual_component(const quantum::JointState& full,
                                              const quantum::JointState& rho0, double weight,
                                              double rest = std::nan("")) {
  if (std::isnan(rest)) rest = 1.0 - weight;
  if (!(rest > kDegenerateShift)) {
    throw DegenerateWeight("residual_component: separable weight is 1, residual undefined");
  }
  return {(full.pp - weight * rho0.pp) / rest, (full.pm - weight * rho0.pm) / rest,
          (full.mp - weight * rho0.mp) / rest, (full.mm - weight * rho0.mm) / rest};
}

/// Σ|μ| over the eigenvalues of a Hermitian joint-space operator.
inline double trace_norm(const quantum::JointState& s) {
  Eigen::MatrixXcd m = s.full_matrix();
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

struct DecompositionReport {
  double weight_separable = 1.0;
  double residual_weight = 0.0;
  cplx coherence_sep;   // c⁽⁰⁾
  cplx coherence_full;  // c
  cplx coherence_residual{std::nan(""), std::nan("")};  // c⁽¹⁾
  double coherence_sep_stderr = 0.0;
  /// ‖ρ − e^{−|δ|²}ρ⁽⁰⁾‖₁; equals 1 − e^{−|δ|²} when ρ⁽¹⁾ is a density matrix.
  double trace_norm_residual = 0.0;
  /// ½‖ρ − ρ⁽⁰⁾‖₁.
  double trace_distance_to_separable = 0.0;
  double trace_sep = 1.0;
  double trace_residual = std::nan("");
  double negativity_sep = 0.0;
  bool degenerate = false;
  bool convergence_warning = false;
};

/// Splits an evolved thermal state into its separable and residual parts.
/// At revivals (|δ|² < 1e-14) the residual is undefined and the report
/// carries weight 1 with `degenerate` set.
inline DecompositionReport decompose(const quantum::JointState& full, double nbar, double lambda,
                                     PhaseAngle phase, const FockSpace& space,
                                     const SeparableOptions& opts = {}) {
  const auto sep = build_separable_component(nbar, lambda, phase, space, opts);
  const double shift_sq = std::norm(quantum::conditional_shift(lambda, phase));

  DecompositionReport r;
  r.coherence_sep = sep.coherence;
  r.coherence_sep_stderr = sep.stderr_coherence;
  r.coherence_full = quantum::reduced_atom(full).coherence();
  r.trace_sep = sep.rho0.trace();
  r.negativity_sep = negativity(sep.rho0);
  r.convergence_warning = sep.convergence_warning;

  const quantum::JointState diff{full.pp - sep.rho0.pp, full.pm - sep.rho0.pm,
                                 full.mp - sep.rho0.mp, full.mm - sep.rho0.mm};
  r.trace_distance_to_separable = 0.5 * trace_norm(diff);

  if (shift_sq < kDegenerateShift) {
    r.degenerate = true;
    r.weight_separable = 1.0;
    r.residual_weight = 0.0;
    return r;
  }
  r.weight_separable = std::exp(-shift_sq);
  r.residual_weight = -std::expm1(-shift_sq);
  const auto rho1 = residual_component(full, sep.rho0, r.weight_separable, r.residual_weight);
  r.trace_residual = rho1.trace();
  r.coherence_residual = quantum::reduced_atom(rho1).coherence();
  r.trace_norm_residual = r.residual_weight * trace_norm(rho1);
  return r;
}

}  // namespace revival::analysis
