#pragma once

// Truncated Fock-space primitives: coherent states, displacement operators
// and thermal states on levels 0..dim−1.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "revival/atom.hpp"
#include "revival/errors.hpp"

namespace revival::fock {

/// Extra levels used when exponentiating a truncated generator before
/// cropping back to the working dimension.
inline constexpr int kDisplacementPad = 16;

/// Coherent-state tail deficit above which the vector is re-normalized.
inline constexpr double kRenormalizeThreshold = 1e-12;

/// Coherent-state tail deficit above which truncation is rejected.
inline constexpr double kCoherentTailLimit = 1e-8;

/// Truncated Fock space with levels 0..dim−1.
struct FockSpace {
  int dim = 32;
  /// Largest acceptable population beyond level dim−1 for thermal states.
  double tail_tolerance = 1e-10;

  explicit FockSpace(int d, double tol = 1e-10) : dim(d), tail_tolerance(tol) {
    if (d < 2) throw InvalidParams("FockSpace: dim must be at least 2");
    if (!(tol > 0.0)) throw InvalidParams("FockSpace: tail tolerance must be positive");
  }
};

/// Population beyond level dim−1 of a thermal state with mean occupation n̄.
inline double thermal_tail_mass(double nbar, int dim) {
  if (nbar <= 0.0) return 0.0;
  return std::exp(dim * std::log(nbar / (nbar + 1.0)));
}

/// log |⟨n|α⟩|² for the Poisson weights of a coherent state.
inline double log_poisson_weight(double mean, int n) {
  if (mean == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

/// Population beyond level dim−1 of the coherent state |α⟩, |α|² = mean.
inline double coherent_tail_mass(double mean, int dim) {
  if (mean == 0.0) return 0.0;
  // Sum the tail directly; the terms peak near n = mean and decay
  // super-exponentially beyond it.
  double tail = 0.0;
  for (int n = dim;; ++n) {
    const double w = std::exp(log_poisson_weight(mean, n));
    tail += w;
    if (n > mean + 1 && w < 1e-30 * std::max(tail, 1e-300)) break;
    if (n > dim + 100000) break;
  }
  return tail;
}

/// Dimension sufficient for a thermal state of occupation `nbar`, a coherent
/// state of amplitude `alpha_abs`, and conditional displacements of size
/// ~2λ, with thermal and coherent tails below `tol`.
///
/// Starts from max(32, ⌈1.5(n̄ + |α|² + 6(√n̄ + |α|) + 8λ)⌉) and grows the
/// result until both tail masses, evaluated 8 levels below the edge, pass.
inline int required_dim(double nbar, double alpha_abs, double lambda, double tol = 1e-10) {
  const double heuristic =
      1.5 * (nbar + alpha_abs * alpha_abs + 6.0 * (std::sqrt(nbar) + alpha_abs) + 8.0 * lambda);
  int dim = std::max(32, static_cast<int>(std::ceil(heuristic)));
  constexpr int kMargin = 8;
  if (nbar > 0.0) {
    const double q = nbar / (nbar + 1.0);
    const int thermal = static_cast<int>(std::ceil(std::log(tol) / std::log(q))) + kMargin;
    dim = std::max(dim, thermal);
  }
  const double shifted = alpha_abs + 2.0 * lambda;
  while (coherent_tail_mass(shifted * shifted, dim - kMargin) > tol) dim += 8;
  return dim;
}

/// Truncated state vector plus the truncation diagnostics.
struct TruncatedVector {
  Eigen::VectorXcd amplitudes;
  double tail_mass = 0.0;
  bool renormalized = false;
};

/// |α⟩ = e^{−|α|²/2} Σ αⁿ/√(n!) |n⟩, truncated to the space.
inline TruncatedVector coherent_state(cplx alpha, const FockSpace& space) {
  const double mean = std::norm(alpha);
  TruncatedVector out;
  out.amplitudes = Eigen::VectorXcd::Zero(space.dim);
  const double arg = std::arg(alpha);
  for (int n = 0; n < space.dim; ++n) {
    const double mag = std::exp(0.5 * log_poisson_weight(mean, n));
    out.amplitudes[n] = std::polar(mag, n * arg);
  }
  out.tail_mass = coherent_tail_mass(mean, space.dim);
  if (out.tail_mass > kCoherentTailLimit) {
    throw TailOverflow("coherent_state: |alpha|=" + std::to_string(std::abs(alpha)) +
                           " does not fit in dim=" + std::to_string(space.dim),
                       out.tail_mass);
  }
  if (out.tail_mass > kRenormalizeThreshold) {
    out.amplitudes.normalize();
    out.renormalized = true;
  }
  return out;
}

/// Annihilation operator a on `dim` levels.
inline Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// a†a as a real diagonal.
inline Eigen::VectorXd number_diagonal(int dim) {
  return Eigen::VectorXd::LinSpaced(dim, 0.0, dim - 1.0);
}

/// D(ζ) = exp[ζa† − ζ*a] at dimension `dim`, obtained by exponentiating the
/// generator on dim + pad levels and cropping.
inline Eigen::MatrixXcd displacement_matrix(cplx zeta, int dim, int pad = kDisplacementPad) {
  const int big = dim + pad;
  const Eigen::MatrixXcd a = annihilation(big);
  const Eigen::MatrixXcd generator = zeta * a.adjoint() - std::conj(zeta) * a;
  const Eigen::MatrixXcd full = generator.exp();
  return full.topLeftCorner(dim, dim);
}

/// D(ζ) on the space. Throws TailOverflow when D(ζ)|0⟩ would not fit.
inline Eigen::MatrixXcd displacement(cplx zeta, const FockSpace& space) {
  const double tail = coherent_tail_mass(std::norm(zeta), space.dim);
  if (tail > kCoherentTailLimit) {
    throw TailOverflow("displacement: |zeta|=" + std::to_string(std::abs(zeta)) +
                           " too large for dim=" + std::to_string(space.dim),
                       tail);
  }
  return displacement_matrix(zeta, space.dim);
}

/// Oscillator density operator in the Fock basis.
struct OscillatorState {
  Eigen::MatrixXcd rho;

  [[nodiscard]] int dim() const { return static_cast<int>(rho.rows()); }
  [[nodiscard]] double trace() const { return rho.trace().real(); }

  /// Tr ρ², computed as the squared Frobenius norm.
  [[nodiscard]] double purity() const { return rho.squaredNorm(); }

  [[nodiscard]] double mean_occupation() const {
    return (rho.diagonal().real().array() * number_diagonal(dim()).array()).sum();
  }

  [[nodiscard]] bool is_physical(double tol = 1e-10) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace() - cplx(1.0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }
};

/// Thermal state Σ n̄ⁿ/(n̄+1)^{n+1} |n⟩⟨n|, renormalized over the kept levels.
inline OscillatorState thermal_state(double nbar, const FockSpace& space) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidParams("thermal_state: nbar must be finite and non-negative");
  }
  const double tail = thermal_tail_mass(nbar, space.dim);
  if (tail > space.tail_tolerance) {
    throw TailOverflow("thermal_state: nbar=" + std::to_string(nbar) + " leaves tail mass " +
                           std::to_string(tail) + " beyond dim=" + std::to_string(space.dim),
                       tail);
  }
  Eigen::VectorXd p(space.dim);
  if (nbar == 0.0) {
    p.setZero();
    p[0] = 1.0;
  } else {
    const double log_q = std::log(nbar / (nbar + 1.0));
    const double log_norm = -std::log1p(nbar);
    for (int n = 0; n < space.dim; ++n) p[n] = std::exp(log_norm + n * log_q);
    p /= p.sum();
  }
  return {p.cast<cplx>().asDiagonal().toDenseMatrix()};
}

/// |ψ⟩⟨ψ| as an oscillator state.
inline OscillatorState pure_state(const Eigen::VectorXcd& psi) {
  return {psi * psi.adjoint()};
}

}  // namespace revival::fock
