#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace ccmckp {

// SplitMix64 finalizer. Used to expand seeds and to derive child streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hashes a seed together with a path of tags into a new 64-bit seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t tag : path) h = splitmix64(h ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
  return h;
}

// Seedable xoshiro256++ generator with the variate transforms the samplers
// need. Every transform is implemented here (no <random> distributions) so
// that a seed reproduces the same stream on every platform and compiler.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  // Independent stream keyed by (this stream's seed, path).
  RandomStream derive(std::initializer_list<std::uint64_t> path) const noexcept {
    return RandomStream(derive_seed(seed_, path));
  }

  std::uint64_t next_u64() noexcept {
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

  // [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // (0, 1]
  double uniform_open0() noexcept { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be positive. Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t n) noexcept;

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Standard normal via the 128-layer ziggurat.
  double normal() noexcept;

  // Standard exponential.
  double exponential() noexcept;

  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape) noexcept;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  double normal_tail(std::int32_t hz, std::uint32_t iz) noexcept;

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace ccmckp
