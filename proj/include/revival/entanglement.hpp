#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "revival/errors.hpp"
#include "revival/quantum.hpp"

namespace revival::analysis {

using quantum::JointState;

/// Largest trace drift tolerated from the conditional evolution.
inline constexpr double kEvolveTraceDrift = 1e-9;

/// Partial-transpose eigenvalues above −kNegativityClamp count as zero.
inline constexpr double kNegativityClamp = 10.0 * kEvolveTraceDrift;

/// Minimum global purity Tr ρ² for the atom entropy to count as an
/// entanglement measure.
inline constexpr double kPurityGuard = 1.0 - 1e-6;

/// Partial transpose on the qubit: ⟨s|ρ^{T_A}|s'⟩ = ⟨s'|ρ|s⟩.
inline Eigen::MatrixXcd partial_transpose_qubit(const JointState& s) {
  const int d = s.dim();
  Eigen::MatrixXcd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = s.pp;
  out.topRightCorner(d, d) = s.mp;
  out.bottomLeftCorner(d, d) = s.pm;
  out.bottomRightCorner(d, d) = s.mm;
  return out;
}

/// Spectrum of the qubit partial transpose, ascending.
inline Eigen::VectorXd partial_transpose_spectrum(const JointState& s) {
  Eigen::MatrixXcd pt = partial_transpose_qubit(s);
  // Symmetrize so that truncation-level asymmetry never reaches the solver.
  pt = 0.5 * (pt + pt.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// N = Σ|μ| over partial-transpose eigenvalues μ < −clamp.
inline double negativity(const JointState& s, double clamp = kNegativityClamp) {
  const Eigen::VectorXd mu = partial_transpose_spectrum(s);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu[i] < -clamp) sum -= mu[i];
  }
  return sum;
}

/// Shannon entropy −Σ p ln p of a probability vector (0 ln 0 = 0).
inline double shannon_entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

/// Von Neumann entropy of the reduced atom state. Only meaningful as an
/// entanglement measure for a pure joint state, so a PurityGuard is thrown
/// when Tr ρ² ≤ 1 − 1e-6.
inline double entanglement_entropy_pure(const JointState& s) {
  const double purity = s.purity() / (s.trace() * s.trace());
  if (purity <= kPurityGuard) {
    throw PurityGuard("entanglement_entropy_pure: joint state is mixed (purity " +
                          std::to_string(purity) + ")",
                      purity);
  }
  Eigen::VectorXd p = quantum::reduced_atom(s).eigenvalues().cwiseMax(0.0);
  p /= p.sum();
  return shannon_entropy(p);
}

}  // namespace revival::analysis
