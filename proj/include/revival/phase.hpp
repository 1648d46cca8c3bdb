#pragma once

#include <cmath>
#include <numbers>

namespace revival {

/// Dimensionless oscillator phase ωt. Every engine is parameterised by this
/// value; wall-clock times are converted once at the boundary.
class PhaseAngle {
 public:
  constexpr PhaseAngle() = default;
  constexpr explicit PhaseAngle(double omega_t) : omega_t_(omega_t) {}

  static PhaseAngle from_seconds(double t, double omega) {
    return PhaseAngle(omega * t);
  }

  /// Multiples of a full oscillator period, i.e. ωt = 2πk.
  static constexpr PhaseAngle periods(double k) {
    return PhaseAngle(2.0 * std::numbers::pi * k);
  }

  [[nodiscard]] constexpr double value() const noexcept { return omega_t_; }
  [[nodiscard]] double seconds(double omega) const { return omega_t_ / omega; }

  /// sin²(ωt/2), the factor that controls every visibility dip.
  [[nodiscard]] double half_sin_squared() const {
    const double s = std::sin(0.5 * omega_t_);
    return s * s;
  }

  friend constexpr bool operator==(PhaseAngle, PhaseAngle) = default;

 private:
  double omega_t_ = 0.0;
};

}  // namespace revival
