#ifndef RETROBELL_RNG_HPP
#define RETROBELL_RNG_HPP

#include <cstdint>

namespace retrobell {

// SplitMix64 output function (Steele, Lea, Flood); a 64-bit bijection used
// for seed expansion and substream derivation.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ 1.0 (Blackman, Vigna).  Seedable, splittable via a documented
// substream rule, and usable wherever a UniformRandomBitGenerator fits.
//
// Stream derivation: substream(seed, k) expands the 256-bit state from a
// SplitMix64 sequence started at splitmix64_mix(seed) ^ splitmix64_mix(~k).
// Distinct batch indices under a fixed seed give distinct, decorrelated
// states, and the map is pure, so batch k can be regenerated in isolation.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64_mix(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
  }

  static Xoshiro256pp substream(std::uint64_t seed, std::uint64_t stream_index) {
    return Xoshiro256pp(splitmix64_mix(seed) ^ splitmix64_mix(~stream_index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace retrobell

#endif  // RETROBELL_RNG_HPP
