#pragma once
#include <cstdint>
#include <utility>

namespace wso {

using PointId = int32_t;

// Independent keyed hash streams so the corruption mask, adversary values,
// perturbation draws and sampling decisions never share randomness.
enum class HashStream : uint64_t {
  mask = 1,
  adversary = 2,
  perturb = 3,
  sample = 4,
};

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

inline uint64_t pair_key(PointId a, PointId b) {
  if (a > b) std::swap(a, b);
  return (uint64_t(uint32_t(a)) << 32) | uint32_t(b);
}

inline uint64_t pair_hash(uint64_t seed, HashStream s, PointId a, PointId b) {
  uint64_t h = detail::splitmix64(seed ^ (uint64_t(s) * 0xd6e8feb86659fd93ull));
  return detail::splitmix64(h ^ pair_key(a, b));
}

// Uniform in [0,1), drawn once per unordered pair.
inline double pair_uniform(uint64_t seed, HashStream s, PointId a, PointId b) {
  return double(pair_hash(seed, s, a, b) >> 11) * 0x1.0p-53;
}

inline double point_uniform(uint64_t seed, HashStream s, PointId a) {
  uint64_t h = detail::splitmix64(seed ^ (uint64_t(s) * 0xd6e8feb86659fd93ull));
  return double(detail::splitmix64(h ^ (0x51ed270b4d2f8ea7ull + uint64_t(uint32_t(a)))) >> 11) * 0x1.0p-53;
}

}  // namespace wso
