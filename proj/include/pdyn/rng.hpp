#pragma once

#include "pdyn/rational.hpp"

#include <cstdint>

namespace pdyn {

// splitmix64. Used instead of <random> engines/distributions so that streams
// are identical across standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }

  bool coin() { return next() & 1; }

  // exact dyadic in [0, 1) with `bits` random bits
  Rat unit_dyadic(int bits = 30) {
    uint64_t mask = bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
    return Rat(BigInt(next() & mask), BigInt(1) << bits);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

// Documented shard-splitting rule: seed_i = master ^ (i * 0x9E3779B97F4A7C15).
inline uint64_t shard_seed(uint64_t master, uint64_t i) {
  return master ^ (i * 0x9E3779B97F4A7C15ULL);
}

}  // namespace pdyn
