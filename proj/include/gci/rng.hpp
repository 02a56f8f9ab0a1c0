#ifndef GCI_RNG_HPP
#define GCI_RNG_HPP

#include <cstdint>
#include <random>

namespace gci {

// splitmix64 finalizer; the standard 64-bit mixing constants.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seed for logical stream `stream` under a base seed. Used to expand one
/// user-facing seed into per-trial and per-measure seeds:
/// derived = mix64(base + (stream + 1) * 0x9e3779b97f4a7c15).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + (stream + 1) * 0x9e3779b97f4a7c15ull);
}

/// Engine for one fixed-size sample chunk. Chunks are independently seeded
/// from (seed, chunk index), so estimates do not depend on how chunks are
/// scheduled.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace gci

#endif  // GCI_RNG_HPP
