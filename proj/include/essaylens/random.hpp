#pragma once

#include <cstdint>
#include <random>

namespace essaylens {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent substream seeds from a
/// base seed and an index so per-row / per-trial streams do not depend on
/// evaluation order.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine substream(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

/// Uniform double in [0, 1) from the top 53 bits; engine-exact across platforms.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace essaylens
