#include "longtail/random.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace longtail {

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined word.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::UniformIndex(std::uint64_t bound) {
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  UniformIndex(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::UniformReal() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Normal(double mean, double sigma) {
  double u1 = UniformReal();
  while (u1 <= 0.0) u1 = UniformReal();
  const double u2 = UniformReal();
  return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace longtail
