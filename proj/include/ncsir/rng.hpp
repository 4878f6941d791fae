#pragma once

// Counter-based normal variates: Philox4x32-10 (Salmon et al., SC'11) keyed
// by the seed, with the counter built from (path_index, step_index). Any
// draw can be regenerated from its coordinates alone, so paths can be run in
// any order on any number of threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ncsir::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kMulA = 0xD2511F53u;
inline constexpr std::uint32_t kMulB = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeylA = 0x9E3779B9u;
inline constexpr std::uint32_t kWeylB = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr Counter round(const Counter& c, const Key& k) {
  std::uint32_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
  mulhilo(kMulA, c[0], hi0, lo0);
  mulhilo(kMulB, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace detail

constexpr Counter philox4x32(Counter c, Key k) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += detail::kWeylA;
      k[1] += detail::kWeylB;
    }
    c = detail::round(c, k);
  }
  return c;
}

/// 52-bit midpoint grid in the open interval (0, 1); 53 bits would round
/// the top cell to exactly 1.
constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normal draws indexed by (path, step).
class NormalStream {
 public:
  constexpr NormalStream(std::uint64_t seed, std::uint64_t path_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_lo_(static_cast<std::uint32_t>(path_index)),
        path_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

  /// Box-Muller on one Philox block; pure function of (seed, path, step).
  double normal(std::uint64_t step) const {
    const Counter out = philox4x32(
        {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), path_lo_, path_hi_}, key_);
    const double u1 = to_open_unit(out[0], out[1]);
    const double u2 = to_open_unit(out[2], out[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  Key key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
};

}  // namespace ncsir::rng
