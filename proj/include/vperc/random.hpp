#pragma once

#include <cstdint>
#include <random>

namespace vperc {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the i-th independent stream under `master`.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t i) {
  return splitmix64(splitmix64(master) ^ splitmix64(i + 0x632be59bd9b4e019ULL));
}

/// Uniform on [0,1) with 53 random bits; platform independent.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace vperc
