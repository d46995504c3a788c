#pragma once

#include <cstdint>
#include <random>

namespace dlab {

/// Seeded, splittable random stream. Identical (seed, stream) pairs give
/// identical draws; split(i) derives child streams whose seeds are mixed
/// through SplitMix64, so replicas never share state.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  RandomSource split(std::uint64_t index) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (polar Box-Muller, no cached spare).
  double normal();
  /// +1 with probability p, else -1.
  int sign(double p);
  /// Fair bit.
  bool coin();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace dlab
