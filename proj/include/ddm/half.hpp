#pragma once

#include <cstdint>

namespace ddm {

/// IEEE-754 binary16 bit pattern: 1 sign, 5 exponent, 10 mantissa bits.
struct Half {
  std::uint16_t bits = 0;

  friend bool operator==(Half, Half) = default;
};

inline constexpr double kHalfMaxFinite = 65504.0;  // (2 - 2^-10) * 2^15
inline constexpr double kHalfMinNormal = 0x1p-14;
inline constexpr double kHalfMinSubnormal = 0x1p-24;

// Values at or above this round to infinity under round-to-nearest-even
// (midpoint between 65504 and the out-of-range 65536; the tie goes to the
// even significand, which overflows).
inline constexpr double kHalfOverflowThreshold = 65520.0;

/// Round a double to the nearest binary16 (ties to even), independent of any
/// hardware half support. Overflow produces +-infinity per IEEE; subnormals
/// are produced exactly. Throws Errc::NanInput for NaN.
Half encode_half(double x);

/// Exact widening: every binary16 value is exactly representable in double.
/// NaN patterns decode to NaN.
double decode_half(Half h);

inline bool half_is_nan(Half h) {
  return (h.bits & 0x7C00u) == 0x7C00u && (h.bits & 0x03FFu) != 0;
}

inline bool half_is_inf(Half h) { return (h.bits & 0x7FFFu) == 0x7C00u; }

inline bool half_is_finite(Half h) { return (h.bits & 0x7C00u) != 0x7C00u; }

}  // namespace ddm
