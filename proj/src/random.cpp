#include "routepred/random.hpp"

namespace routepred {

std::uint64_t Rng::below(std::uint64_t bound) {
  // 2^64 mod bound; values below it are rejected so the rest is a whole
  // number of residue cycles.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t v = engine_();
  while (v < threshold) v = engine_();
  return v % bound;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace routepred
