#pragma once

#include <cstdint>

namespace hgclust {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed from a master seed and two indices.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

/// Counter-based generator: every draw is a pure function of (seed, stream, counter),
/// so per-edge draws keyed by combinatorial rank do not depend on iteration order.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    return splitmix64(splitmix64(seed_ ^ splitmix64(stream)) + counter * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Stream tags so that independent uses of one seed never share draws.
inline constexpr std::uint64_t kStreamEdgeWeight = 1;
inline constexpr std::uint64_t kStreamObservation = 2;

}  // namespace hgclust
