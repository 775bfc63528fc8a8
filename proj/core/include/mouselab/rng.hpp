#pragma once
#include <cstdint>
#include <random>

namespace mouselab {

// splitmix64 finalizer; used to derive independent substreams from a master
// seed so that trajectory i is reproducible regardless of how many draws
// earlier trajectories consumed.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t substream_seed(uint64_t master, uint64_t index) {
  return mix64(master ^ mix64(index + 1));
}

inline std::mt19937_64 make_rng(uint64_t master, uint64_t index) {
  return std::mt19937_64(substream_seed(master, index));
}

}  // namespace mouselab
