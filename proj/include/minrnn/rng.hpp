#pragma once

#include <cmath>
#include <cstdint>

#include "minrnn/common.hpp"

namespace minrnn {

inline u64 splitmix64(u64& s) {
  u64 z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64. All sampling goes through explicit
// integer-to-float conversions so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(u64 seed = 0) {
    u64 s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  // Derives an independent stream from (seed, tag, index). Used to give every
  // training step / purpose its own counter-addressed stream.
  static Rng stream(u64 seed, u64 tag, u64 index = 0) {
    u64 s = seed;
    u64 a = splitmix64(s) ^ (tag * 0x9e3779b97f4a7c15ull);
    u64 b = a ^ (index + 0x2545f4914f6cdd1dull) * 0xda942042e4dd58b5ull;
    return Rng(b);
  }

  u64 next_u64() {
    const u64 result = rotl(state_[1] * 5, 7) * 9;
    const u64 t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be positive.
  i64 below(i64 n) {
    if (n <= 0) throw contract_error("Rng::below: n must be positive");
    // rejection sampling to avoid modulo bias
    const u64 un = static_cast<u64>(n);
    const u64 limit = ~u64(0) - ~u64(0) % un;
    u64 v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<i64>(v % un);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Serialization for checkpoints.
  void save(u64 out[4]) const {
    for (int i = 0; i < 4; ++i) out[i] = state_[i];
  }
  void load(const u64 in[4]) {
    for (int i = 0; i < 4; ++i) state_[i] = in[i];
  }

 private:
  static u64 rotl(u64 x, int k) { return (x << k) | (x >> (64 - k)); }
  u64 state_[4];
};

}  // namespace minrnn
