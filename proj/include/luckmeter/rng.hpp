#pragma once

#include <cstdint>

#include "luckmeter/corrstats.hpp"

namespace luckmeter {

// splitmix64 (Steele, Lea & Flood mixer). One 64-bit word of state; output k
// of the stream seeded with s is finalize(s + (k+1)*gamma), so forking a
// child stream per index is a single mix. Uniform doubles are the top 53
// bits centered in their bucket and normals come from the inverse CDF, which
// keeps every draw reproducible across platforms and ports given the seed.
struct SplitMix64 {
  std::uint64_t state = 0;

  static constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state += gamma;
    return finalize(state);
  }

  // uniform on (0,1), never exactly 0 or 1
  double next_unit() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53; }

  double next_normal() { return normal_quantile(next_unit()); }
};

inline std::uint64_t stream_seed_at(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64::finalize(seed + (index + 1) * SplitMix64::gamma);
}

// Independent child generator for (seed, index); equals skipping to output
// `index` of the parent stream and seeding with it.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64{stream_seed_at(seed, index)};
}

}  // namespace luckmeter
