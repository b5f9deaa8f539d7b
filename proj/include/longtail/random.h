#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace longtail {

// Mixes a base seed with a stream index so that sub-computations (batch b,
// partition p, ...) draw from independent, reproducible streams.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Portable seeded generator. The standard distributions are implementation
// defined, so bounded draws and shuffles are done here on top of the raw
// mt19937_64 output to keep sampled batches identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);

  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

  // Uniform real in [0, 1).
  double UniformReal();

  double Normal(double mean, double sigma);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace longtail
