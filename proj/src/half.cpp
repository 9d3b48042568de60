#include "ddm/half.hpp"

#include <cmath>

#include "ddm/error.hpp"

namespace ddm {

namespace {

// Round-to-nearest-even of y >= 0 to an integer. y is at most 2^11 here, so
// floor and the residual subtraction are exact and the tie test is reliable.
std::uint32_t round_nearest_even_u32(double y) {
  double f = std::floor(y);
  double r = y - f;
  auto q = static_cast<std::uint32_t>(f);
  if (r > 0.5 || (r == 0.5 && (q & 1u))) ++q;
  return q;
}

}  // namespace

Half encode_half(double x) {
  if (std::isnan(x)) fail(Errc::NanInput, "cannot encode NaN as binary16");

  const std::uint16_t sign = std::signbit(x) ? 0x8000u : 0x0000u;
  const double a = std::fabs(x);

  if (a >= kHalfOverflowThreshold) return Half{static_cast<std::uint16_t>(sign | 0x7C00u)};
  if (a == 0.0) return Half{sign};

  int bin_exp = 0;        // a = f * 2^bin_exp with f in [0.5, 1)
  std::frexp(a, &bin_exp);
  const int e = bin_exp - 1;  // 2^e <= a < 2^(e+1)

  std::uint16_t mag = 0;
  if (e < -14) {
    // Subnormal target: quantize in units of 2^-24. A carry to 1024 lands on
    // the smallest normal encoding (exponent field 1, mantissa 0) by itself.
    mag = static_cast<std::uint16_t>(round_nearest_even_u32(std::ldexp(a, 24)));
  } else {
    // Normal target: significand in units of 2^(e-10) is in [1024, 2048];
    // a carry to 2048 rolls into the exponent field by itself.
    const std::uint32_t q = round_nearest_even_u32(std::ldexp(a, 10 - e));
    mag = static_cast<std::uint16_t>((static_cast<std::uint32_t>(e + 15) << 10) + (q - 1024u));
  }
  return Half{static_cast<std::uint16_t>(sign | mag)};
}

double decode_half(Half h) {
  const unsigned sign = h.bits >> 15;
  const unsigned exp_field = (h.bits >> 10) & 0x1Fu;
  const unsigned mantissa = h.bits & 0x3FFu;

  double mag = 0.0;
  if (exp_field == 0) {
    mag = std::ldexp(static_cast<double>(mantissa), -24);
  } else if (exp_field == 31) {
    mag = mantissa ? std::nan("") : HUGE_VAL;
  } else {
    mag = std::ldexp(static_cast<double>(mantissa + 1024u), static_cast<int>(exp_field) - 25);
  }
  return sign ? -mag : mag;
}

}  // namespace ddm
