#pragma once

// Fully quantum qubit–oscillator model. The Hamiltonian
// ħω(a† − λσ_z)(a − λσ_z) conditions the oscillator displacement on σ_z, so
// the joint state is stored as four oscillator blocks ρ_{ss'} = ⟨s|ρ|s'⟩
// and each σ_z branch is evolved with its own dim×dim operator
//   U_s = D†(−λs) e^{−iωt a†a} D(−λs).

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "revival/atom.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/phase.hpp"

namespace revival::quantum {

using fock::FockSpace;
using fock::OscillatorState;

/// Qubit ⊗ oscillator density operator in block form; index 0 is |+⟩.
struct JointState {
  Eigen::MatrixXcd pp, pm, mp, mm;

  [[nodiscard]] int dim() const { return static_cast<int>(pp.rows()); }

  [[nodiscard]] double trace() const { return pp.trace().real() + mm.trace().real(); }

  /// Tr ρ².
  [[nodiscard]] double purity() const {
    return pp.squaredNorm() + pm.squaredNorm() + mp.squaredNorm() + mm.squaredNorm();
  }

  /// The 2dim×2dim matrix with the qubit as the outer index.
  [[nodiscard]] Eigen::MatrixXcd full_matrix() const {
    const int d = dim();
    Eigen::MatrixXcd out(2 * d, 2 * d);
    out.topLeftCorner(d, d) = pp;
    out.topRightCorner(d, d) = pm;
    out.bottomLeftCorner(d, d) = mp;
    out.bottomRightCorner(d, d) = mm;
    return out;
  }

  [[nodiscard]] bool is_physical(double tol = 1e-10) const {
    if ((pp - pp.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if ((mm - mm.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if ((mp - pm.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(trace() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full_matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }

  /// ρ_A ⊗ ρ_O.
  static JointState product(const AtomState& atom, const OscillatorState& osc) {
    const auto& a = atom.matrix();
    return {a(0, 0) * osc.rho, a(0, 1) * osc.rho, a(1, 0) * osc.rho, a(1, 1) * osc.rho};
  }

  /// Equal-superposition atom ½(I + σ_x) times the oscillator state.
  static JointState superposition_with(const OscillatorState& osc) {
    return product(AtomState::from_coherence(0.5), osc);
  }
};

/// Tr_O ρ: populations Tr ρ_{±±} and coherence c = Tr ρ_{+−}.
inline AtomState reduced_atom(const JointState& joint) {
  Eigen::Matrix2cd r;
  r << joint.pp.trace(), joint.pm.trace(), joint.mp.trace(), joint.mm.trace();
  return AtomState(r);
}

/// δ(t) = λ(e^{−iωt} − 1).
inline cplx conditional_shift(double lambda, PhaseAngle phase) {
  return lambda * (std::polar(1.0, -phase.value()) - 1.0);
}

/// Closed form c = ½ exp[−8λ²(2n̄+1) sin²(ωt/2)].
inline cplx quantum_coherence_oracle(double lambda, double nbar, PhaseAngle phase) {
  return {0.5 * std::exp(-8.0 * lambda * lambda * (2.0 * nbar + 1.0) * phase.half_sin_squared()), 0.0};
}

/// The σ_z-conditional evolution for a fixed coupling on a fixed space.
/// The two displacements D(±λ) are built once; each phase only changes the
/// diagonal free rotation between them. Products are formed on the padded
/// space and cropped afterwards.
class ConditionalEvolution {
 public:
  ConditionalEvolution(double lambda, const FockSpace& space)
      : lambda_(lambda), dim_(space.dim), padded_(space.dim + fock::kDisplacementPad) {
    // Branch s uses D(λs) on the left and D(−λs) on the right.
    const double tail = fock::coherent_tail_mass(4.0 * lambda * lambda, dim_);
    if (tail > fock::kCoherentTailLimit) {
      throw TailOverflow("ConditionalEvolution: lambda too large for dim", tail);
    }
    d_plus_ = fock::displacement_matrix(lambda, padded_, 0);
    d_minus_ = fock::displacement_matrix(-lambda, padded_, 0);
  }

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }

  /// U_s cropped to the working dimension; s = +1 or −1.
  [[nodiscard]] Eigen::MatrixXcd unitary(int s, PhaseAngle phase) const {
    const Eigen::VectorXcd rot = rotation_diagonal(phase);
    const Eigen::MatrixXcd& left = s > 0 ? d_plus_ : d_minus_;
    const Eigen::MatrixXcd& right = s > 0 ? d_minus_ : d_plus_;
    const Eigen::MatrixXcd full = left * rot.asDiagonal() * right;
    return full.topLeftCorner(dim_, dim_);
  }

  /// ρ_{ss'} → U_s ρ_{ss'} U_{s'}†.
  [[nodiscard]] JointState apply(const JointState& initial, PhaseAngle phase) const {
    check_dim(initial);
    const Eigen::MatrixXcd up = unitary(+1, phase);
    const Eigen::MatrixXcd um = unitary(-1, phase);
    JointState out;
    out.pp = up * initial.pp * up.adjoint();
    out.pm = up * initial.pm * um.adjoint();
    out.mp = um * initial.mp * up.adjoint();
    out.mm = um * initial.mm * um.adjoint();
    return out;
  }

  /// c(t) = Tr[U_+ ρ_{+−} U_−†] without forming the evolved blocks.
  [[nodiscard]] cplx coherence(const JointState& initial, PhaseAngle phase) const {
    check_dim(initial);
    const Eigen::MatrixXcd up = unitary(+1, phase);
    const Eigen::MatrixXcd um = unitary(-1, phase);
    return ((um.adjoint() * up).cwiseProduct(initial.pm.transpose())).sum();
  }

 private:
  Eigen::VectorXcd rotation_diagonal(PhaseAngle phase) const {
    Eigen::VectorXcd rot(padded_);
    for (int n = 0; n < padded_; ++n) rot[n] = std::polar(1.0, -phase.value() * n);
    return rot;
  }

  void check_dim(const JointState& s) const {
    if (s.dim() != dim_) throw InvalidParams("ConditionalEvolution: state dimension mismatch");
  }

  double lambda_;
  int dim_;
  int padded_;
  Eigen::MatrixXcd d_plus_;
  Eigen::MatrixXcd d_minus_;
};

/// One-shot evolution of `initial` to phase ωt.
inline JointState evolve(const JointState& initial, PhaseAngle phase, double lambda) {
  return ConditionalEvolution(lambda, FockSpace(initial.dim())).apply(initial, phase);
}

/// Thermal oscillator ⊗ equal-superposition atom.
inline JointState thermal_initial_state(double nbar, const FockSpace& space) {
  return JointState::superposition_with(fock::thermal_state(nbar, space));
}

/// Coherence after evolving |α⟩⟨α| ⊗ ½(I + σ_x). Its magnitude is
/// ½ e^{−2|δ|²} for every α.
inline cplx coherent_initial_coherence(cplx alpha, double lambda, PhaseAngle phase,
                                       const FockSpace& space) {
  const auto psi = fock::coherent_state(alpha, space);
  const JointState initial = JointState::superposition_with(fock::pure_state(psi.amplitudes));
  return ConditionalEvolution(lambda, space).coherence(initial, phase);
}

}  // namespace revival::quantum
