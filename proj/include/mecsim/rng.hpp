#ifndef MECSIM_RNG_HPP_
#define MECSIM_RNG_HPP_

#include <cstdint>
#include <initializer_list>

namespace mecsim::rng {

// splitmix64 finalizer: a well-mixed 64-bit permutation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based hash of a key path such as {seed, trial, device, dim}.
// Draws are independent of evaluation order and of how many other draws
// exist, which gives per-trial reproducibility and the prefix property
// (the first k devices of a scenario do not change when more are added).
inline std::uint64_t hash_path(std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t v : path) {
    h = mix64(h ^ mix64(v));
  }
  return h;
}

// Uniform double in [0, 1) from a key path.
inline double uniform01(std::initializer_list<std::uint64_t> path) {
  return static_cast<double>(hash_path(path) >> 11) * 0x1.0p-53;
}

// Final path component that names the purpose of a draw, so different
// consumers keyed by the same (seed, trial, device) stay independent.
namespace streams {
inline constexpr std::uint64_t kPositionX = 0;
inline constexpr std::uint64_t kPositionY = 1;
inline constexpr std::uint64_t kOffloadDraw = 2;
}  // namespace streams

}  // namespace mecsim::rng

#endif  // MECSIM_RNG_HPP_
