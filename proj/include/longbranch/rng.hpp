#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace longbranch {

/// splitmix64 step: advances `state` by the golden-ratio increment and
/// returns the finalized output.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Child seed for replicate `index` under `master`: the index-th output of
/// the splitmix64 stream started at `master`. This is the mixing function
/// all parallel simulation code uses, so results never depend on how
/// replicates are distributed over workers.
inline uint64_t child_seed(uint64_t master, uint64_t index) {
  uint64_t state = master + index * 0x9E3779B97F4A7C15ull;
  return splitmix64_next(state);
}

/// xoshiro256** seeded through splitmix64. Deterministic given the seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, bound) without modulo bias (Lemire's method).
  uint64_t below(uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      const uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Exponential with the given rate; uses 1-u so the log argument is in (0,1].
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

 private:
  static uint64_t rotl(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

  std::array<uint64_t, 4> state_;
};

}  // namespace longbranch
