#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace revival {

/// Counter-based random stream: every variate is a pure function of
/// (seed, index, lane), so any partition of the index range across workers
/// reproduces the same values.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t index, std::uint64_t lane) const {
    std::uint64_t x = mix(seed_ ^ 0x9e3779b97f4a7c15ULL);
    x = mix(x ^ (index * 0xd1b54a32d192ed03ULL));
    return mix(x ^ (lane * 0x8cb92ba72f3d8dd7ULL + 0x632be59bd9b4e019ULL));
  }

  /// Uniform on the open interval (0, 1).
  [[nodiscard]] double uniform(std::uint64_t index, std::uint64_t lane) const {
    return (static_cast<double>(bits(index, lane) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Pair of independent standard normals via Box-Muller. Distinct
  /// `stream` values give independent pairs for the same index.
  [[nodiscard]] std::pair<double, double> normal_pair(std::uint64_t index,
                                                      std::uint64_t stream = 0) const {
    const double u1 = uniform(index, 2 * stream);
    const double u2 = uniform(index, 2 * stream + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace revival
