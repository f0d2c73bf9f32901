#pragma once

#include <array>
#include <cstdint>

namespace maxlag {

/// xoshiro256** generator, seeded through splitmix64.
///
/// This exact generator (same constants, same seeding) is part of the mesh
/// perturbation contract: perturbed meshes must be reproducible bit-for-bit
/// from (seed, alpha, selector) alone, independent of platform or standard
/// library. Sign choices consume exactly two draws per selected vertex, in
/// ascending vertex-index order; the sign is the low bit of the draw.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      // splitmix64
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// +1.0 or -1.0 from the low bit of the next draw.
  double next_sign() { return (next() & 1ULL) ? 1.0 : -1.0; }

  /// Uniform double in [0, 1).
  double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace maxlag
