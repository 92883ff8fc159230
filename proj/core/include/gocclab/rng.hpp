#pragma once

#include <cmath>
#include <cstdint>

namespace gocclab {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** with a hand-rolled Box-Muller normal. Sequences depend only
// on the seed, not on the standard library, so outputs are bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64_next(x);
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

  // Uniform in (0,1].
  double uniform01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives independent substreams from (seed, index). Monte Carlo drivers
// draw each chunk/trial from its own substream, so aggregated results do
// not depend on how the work is partitioned.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rng substream(std::uint64_t index) const {
    std::uint64_t x = seed_ ^ 0x6a09e667f3bcc909ULL;
    std::uint64_t a = splitmix64_next(x);
    x ^= index * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64_next(x);
    return Rng(a ^ (b + 0x2545f4914f6cdd1dULL));
  }

  Rng root() const { return substream(~0ULL); }

 private:
  std::uint64_t seed_;
};

}  // namespace gocclab
