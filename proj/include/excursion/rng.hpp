#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace excursion {

/// SplitMix64 step (Steele, Lea, Flood 2014); used for seeding and stream hashing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Mixes (seed, stream) into one 64-bit value so replication r of seed s
/// gets its own generator state independent of every other replication.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t h = splitmix64(s);
  std::uint64_t t = h ^ (stream * 0xD1B54A32D192ED03ULL);
  return splitmix64(t);
}

/// xoshiro256++ 1.0 (Blackman & Vigna). State is seeded from SplitMix64 of the key.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t key = 0) {
    for (auto& w : s_) w = splitmix64(key);
  }
  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) : Xoshiro256pp(stream_key(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on (0, 1]: 53 random mantissa bits, never exactly zero.
  double uniform_open0() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-53; }

  /// Two independent standard normals by the Box-Muller transform.
  std::pair<double, double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double angle = 2.0 * std::numbers::pi * uniform_open0();
    return {r * std::cos(angle), r * std::sin(angle)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace excursion
