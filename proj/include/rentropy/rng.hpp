#pragma once

#include <cstdint>
#include <random>

namespace rentropy {

// splitmix64 finalizer, used to decorrelate stream keys before seeding.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent generator for (seed, stream). Every parallel unit of work owns
// its stream, so results do not depend on thread count or execution order.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix64(mix64(seed) ^ stream));
}

// Fixed stream tags keep unrelated consumers of the same user seed apart.
inline constexpr std::uint64_t kStreamSketch = 0x736b657463680000ULL;
inline constexpr std::uint64_t kStreamPower = 0x706f776572000000ULL;
inline constexpr std::uint64_t kStreamMixture = 0x6d69787475726500ULL;
inline constexpr std::uint64_t kStreamKmeans = 0x6b6d65616e730000ULL;
inline constexpr std::uint64_t kStreamRsvd = 0x7273766400000000ULL;
inline constexpr std::uint64_t kStreamPsdCheck = 0x7073646368656b00ULL;

}  // namespace rentropy
