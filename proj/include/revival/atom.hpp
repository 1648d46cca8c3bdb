#pragma once

#include <Eigen/Dense>
#include <complex>

namespace revival {

using cplx = std::complex<double>;

/// Two-level atom density matrix in the {|+⟩, |−⟩} basis, σ_z|±⟩ = ±|±⟩.
class AtomState {
 public:
  AtomState() = default;
  explicit AtomState(const Eigen::Matrix2cd& rho) : rho_(rho) {}

  /// Equal populations with the given ⟨+|ρ|−⟩ coherence.
  static AtomState from_coherence(cplx c) {
    Eigen::Matrix2cd rho;
    rho << 0.5, c, std::conj(c), 0.5;
    return AtomState(rho);
  }

  [[nodiscard]] const Eigen::Matrix2cd& matrix() const noexcept { return rho_; }
  [[nodiscard]] cplx coherence() const { return rho_(0, 1); }
  [[nodiscard]] double population_plus() const { return rho_(0, 0).real(); }
  [[nodiscard]] double population_minus() const { return rho_(1, 1).real(); }

  /// Fringe visibility V = 2|c|.
  [[nodiscard]] double visibility() const { return 2.0 * std::abs(coherence()); }

  [[nodiscard]] Eigen::Vector2d eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// Hermitian, unit trace and positive semidefinite within `tol`.
  [[nodiscard]] bool is_physical(double tol = 1e-12) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho_.trace() - cplx(1.0)) > tol) return false;
    return eigenvalues().minCoeff() >= -tol;
  }

 private:
  Eigen::Matrix2cd rho_ = Eigen::Matrix2cd::Identity() * 0.5;
};

}  // namespace revival
