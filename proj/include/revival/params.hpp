#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "revival/errors.hpp"

namespace revival {

/// CODATA 2018 values. Overridable so that runs can be pinned to a specific
/// constant set.
struct PhysicalConstants {
  double gravitational = 6.67430e-11;    // m^3 kg^-1 s^-2
  double reduced_planck = 1.054571817e-34;  // J s
  double boltzmann = 1.380649e-23;       // J/K
};

/// Experiment description in SI units.
///
/// The atom sits in an equal superposition of the two locations ±d from the
/// oscillator's equilibrium point. All oscillator formulas (trajectory,
/// thermal widths, zero-point length) use the oscillator mass.
struct PhysicalParams {
  double oscillator_mass = 0.0;    // M, kg
  double atom_mass = 0.0;          // m, kg
  double separation = 0.0;         // d, m
  double angular_frequency = 0.0;  // ω, rad/s
  double temperature = 0.0;        // T, K
  PhysicalConstants constants{};
};

/// Reduced model consumed by every engine: the coupling λ and mean thermal
/// occupation n̄, together with the SI intermediates they were built from.
struct DimensionlessParams {
  double lambda = 0.0;
  double nbar = 0.0;

  double chi = 0.0;      // G M m / (ħ d²), s^-1 m^-1
  double g = 0.0;        // χ x_zp, rad/s
  double x_zp = 0.0;     // (ħ / 2Mω)^{1/2}, m
  double sigma_x = 0.0;  // (k_B T / Mω²)^{1/2}, m
  double sigma_p = 0.0;  // (M k_B T)^{1/2}, kg m/s

  double omega = 1.0;            // rad/s
  double oscillator_mass = 1.0;  // kg

  /// Set when ħω/k_BT overflowed and n̄ was clamped to zero.
  bool occupation_clamped = false;
};

namespace detail {

inline void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParams(std::string(name) + " must be finite and strictly positive");
  }
}

// Beyond this ħω/k_BT the Bose-Einstein occupation underflows.
inline constexpr double kOccupationExponentLimit = 700.0;

}  // namespace detail

/// Throws InvalidParams unless every SI input is finite and strictly positive.
inline void validate(const PhysicalParams& p) {
  detail::require_positive(p.oscillator_mass, "oscillator_mass");
  detail::require_positive(p.atom_mass, "atom_mass");
  detail::require_positive(p.separation, "separation");
  detail::require_positive(p.angular_frequency, "angular_frequency");
  detail::require_positive(p.temperature, "temperature");
  detail::require_positive(p.constants.gravitational, "gravitational_constant");
  detail::require_positive(p.constants.reduced_planck, "reduced_planck");
  detail::require_positive(p.constants.boltzmann, "boltzmann");
}

/// Exact Bose-Einstein mean occupation 1/(e^x − 1) for x = ħω/k_BT.
/// Returns 0 and sets `clamped` when x overflows.
inline double bose_einstein_occupation(double hbar_omega_over_kt, bool* clamped = nullptr) {
  if (clamped != nullptr) *clamped = false;
  if (hbar_omega_over_kt > detail::kOccupationExponentLimit) {
    if (clamped != nullptr) *clamped = true;
    return 0.0;
  }
  return 1.0 / std::expm1(hbar_omega_over_kt);
}

/// SI → dimensionless reduction.
inline DimensionlessParams reduce(const PhysicalParams& p) {
  validate(p);
  const auto& c = p.constants;
  const double M = p.oscillator_mass;
  const double w = p.angular_frequency;
  const double kT = c.boltzmann * p.temperature;

  DimensionlessParams dp;
  dp.omega = w;
  dp.oscillator_mass = M;
  dp.chi = c.gravitational * M * p.atom_mass / (c.reduced_planck * p.separation * p.separation);
  dp.x_zp = std::sqrt(c.reduced_planck / (2.0 * M * w));
  dp.g = dp.chi * dp.x_zp;
  dp.lambda = dp.g / w;
  dp.sigma_x = std::sqrt(kT / (M * w * w));
  dp.sigma_p = std::sqrt(M * kT);
  dp.nbar = bose_einstein_occupation(c.reduced_planck * w / kT, &dp.occupation_clamped);
  return dp;
}

/// λ evaluated directly from the SI inputs, G M m x_zp / (ħ d² ω), without
/// going through χ or g.
inline double coupling_direct(const PhysicalParams& p) {
  const auto& c = p.constants;
  const double x_zp = std::sqrt(c.reduced_planck / (2.0 * p.oscillator_mass * p.angular_frequency));
  return c.gravitational * p.oscillator_mass * p.atom_mass * x_zp /
         (c.reduced_planck * p.separation * p.separation * p.angular_frequency);
}

/// Atom mass that produces the coupling `lambda` for the given oscillator
/// and separation.
inline double atom_mass_for_coupling(double lambda, double oscillator_mass, double angular_frequency,
                                     double separation, const PhysicalConstants& c = {}) {
  detail::require_positive(lambda, "lambda");
  const double x_zp = std::sqrt(c.reduced_planck / (2.0 * oscillator_mass * angular_frequency));
  return lambda * c.reduced_planck * separation * separation * angular_frequency /
         (c.gravitational * oscillator_mass * x_zp);
}

/// Dimensionless parameters expressed in natural oscillator units
/// (ħ = M = ω = 1). The classical thermal widths are chosen so that
/// k_BT/ħω equals n̄, which makes the classical and Fock-space thermal states
/// share the same second moments of the phase kick.
inline DimensionlessParams natural_units(double lambda, double nbar) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidParams("lambda must be finite and non-negative");
  }
  if (!std::isfinite(nbar) || nbar < 0.0) {
    throw InvalidParams("nbar must be finite and non-negative");
  }
  DimensionlessParams dp;
  dp.lambda = lambda;
  dp.nbar = nbar;
  dp.omega = 1.0;
  dp.oscillator_mass = 1.0;
  dp.x_zp = std::sqrt(0.5);
  dp.g = lambda;
  dp.chi = lambda / dp.x_zp;
  dp.sigma_x = std::sqrt(nbar);
  dp.sigma_p = std::sqrt(nbar);
  return dp;
}

}  // namespace revival
