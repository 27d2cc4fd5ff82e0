#pragma once

#include <cstdint>
#include <random>

namespace xcs {

/// splitmix64 step; used to derive independent stream seeds from a master
/// seed so that worker order never changes results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from a 64-bit engine; hand-rolled so results do
/// not depend on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

}  // namespace xcs
