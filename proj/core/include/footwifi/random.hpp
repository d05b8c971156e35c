#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace footwifi {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, counter), so results do not depend on evaluation order.
/// Streams are typically particle slots; counters encode the step and the
/// draw within the step.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t h = mix(seed_ ^ 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ stream);
    h = mix(h ^ (counter * 0xd1b54a32d192ed03ULL));
    return h;
  }

  /// Uniform in (0, 1].
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>((bits(stream, counter) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counters 2c and 2c+1.
  double normal(std::uint64_t stream, std::uint64_t counter) const {
    const double u1 = uniform(stream, 2 * counter);
    const double u2 = uniform(stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace footwifi
