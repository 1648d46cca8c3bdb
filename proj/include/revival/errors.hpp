#pragma once

#include <stdexcept>
#include <string>

namespace revival {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or dimensionless parameter violates its invariants.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// A truncated Fock space is too small for the requested state.
class TailOverflow : public Error {
 public:
  TailOverflow(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}

  [[nodiscard]] double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

/// Entanglement entropy requested for a joint state that is not pure.
class PurityGuard : public Error {
 public:
  PurityGuard(const std::string& what, double purity)
      : Error(what), purity_(purity) {}

  [[nodiscard]] double purity() const noexcept { return purity_; }

 private:
  double purity_;
};

/// The residual component of the separable decomposition is undefined
/// because the separable weight is exactly one.
class DegenerateWeight : public Error {
 public:
  using Error::Error;
};

/// Run configuration could not be parsed or failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace revival
