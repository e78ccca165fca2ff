#include "ccmckp/random.hpp"

#include <cmath>

namespace ccmckp {

namespace {

// Ziggurat tables for the standard normal (Marsaglia & Tsang, 128 layers).
struct ZigguratTables {
  std::array<std::uint32_t, 128> kn{};
  std::array<double, 128> wn{};
  std::array<double, 128> fn{};

  ZigguratTables() {
    constexpr double m1 = 2147483648.0;
    constexpr double vn = 9.91256303526217e-3;
    double dn = 3.442619855899;
    double tn = dn;
    const double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
    kn[1] = 0;
    wn[0] = q / m1;
    wn[127] = dn / m1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m1;
    }
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

constexpr double kZigguratR = 3.442619855899;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    word = splitmix64(x);
  }
  // xoshiro must not start from the all-zero state; splitmix64 never
  // yields four zeros in a row, so no further check is needed.
}

std::uint64_t RandomStream::below(std::uint64_t n) noexcept {
  __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<__uint128_t>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::normal() noexcept {
  const auto& t = tables();
  const auto hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(next_u64() >> 32));
  const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127U;
  const std::uint32_t mag = hz < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(hz))
                                   : static_cast<std::uint32_t>(hz);
  if (mag < t.kn[iz]) return hz * t.wn[iz];
  return normal_tail(hz, iz);
}

double RandomStream::normal_tail(std::int32_t hz, std::uint32_t iz) noexcept {
  const auto& t = tables();
  for (;;) {
    double x = hz * t.wn[iz];
    if (iz == 0) {
      double y;
      do {
        x = -std::log(uniform_open0()) / kZigguratR;
        y = -std::log(uniform_open0());
      } while (y + y < x * x);
      return hz > 0 ? kZigguratR + x : -kZigguratR - x;
    }
    if (t.fn[iz] + uniform01() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x)) return x;
    hz = static_cast<std::int32_t>(static_cast<std::uint32_t>(next_u64() >> 32));
    iz = static_cast<std::uint32_t>(hz) & 127U;
    const std::uint32_t mag = hz < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(hz))
                                     : static_cast<std::uint32_t>(hz);
    if (mag < t.kn[iz]) return hz * t.wn[iz];
  }
}

double RandomStream::exponential() noexcept { return -std::log(uniform_open0()); }

double RandomStream::gamma(double shape) noexcept {
  if (shape < 1.0) {
    // Boost: G(a) = G(a + 1) * U^(1/a).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open0(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open0();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace ccmckp
