#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fpnn {

/// Generator used everywhere a seed is accepted.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64/splitmix64";

/// One step of the SplitMix64 finaliser; used to derive independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for stream `index` of `seed`; streams never depend on each other.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ index));
}

/// Uniform integer in [0, n) by rejection, identical across standard libraries.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

}  // namespace fpnn
