#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace divopt {

// SplitMix64, used only to expand a user seed into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). Fixed by name so seeded streams reproduce
// across platforms; the C++ standard library distributions are deliberately
// not used anywhere in this project.
class Xoshiro256PlusPlus {
 public:
  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
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

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Seeded stream of uniform and standard-normal doubles. Normal deviates use
// the Marsaglia polar method (sqrt/log only) and cache the spare deviate, so
// draw order is part of the documented stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_.next(); }
  double uniform01() { return gen_.uniform01(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * gen_.uniform01(); }

  double gaussian() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    while (true) {
      const double u = 2.0 * gen_.uniform01() - 1.0;
      const double v = 2.0 * gen_.uniform01() - 1.0;
      const double r2 = u * u + v * v;
      if (r2 > 0.0 && r2 < 1.0) {
        const double f = std::sqrt(-2.0 * std::log(r2) / r2);
        spare_ = v * f;
        return u * f;
      }
    }
  }

 private:
  Xoshiro256PlusPlus gen_;
  std::optional<double> spare_;
};

}  // namespace divopt
