#pragma once

#include <cmath>
#include <cstdint>

namespace xslab {

/// SplitMix64 (Steele, Lea & Flood): seed expander and stream-key mixer.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256++ (Blackman & Vigna), seeded through SplitMix64.
/// The bit stream is a pure function of the seed, identical on every platform.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
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

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Key for one logical substream: (root seed, purpose tag, entity index).
/// Streams depend only on their own key, never on how many other streams exist.
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t tag, std::uint64_t index) {
  SplitMix64 a{root ^ (0x9E3779B97F4A7C15ULL * (tag + 1))};
  std::uint64_t h = a.next();
  SplitMix64 b{h ^ (0xBF58476D1CE4E5B9ULL * (index + 1))};
  return b.next();
}

/// Seedable stream of uniforms and gaussians. Gaussians use Box-Muller rather
/// than std::normal_distribution, whose output is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t root, std::uint64_t tag, std::uint64_t index)
      : eng_(derive_stream_seed(root, tag, index)) {}

  std::uint64_t next_u64() { return eng_.next(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(eng_.next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

 private:
  Xoshiro256pp eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace xslab
