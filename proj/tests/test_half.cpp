#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "ddm/error.hpp"
#include "ddm/half.hpp"
#include "ddm/rng.hpp"

namespace {

using ddm::decode_half;
using ddm::encode_half;
using ddm::Half;

struct GridPoint {
  double value;
  std::uint16_t bits;
};

// Every positive finite binary16 value, ascending. Built from decode only,
// so it is independent of the encode path under test.
const std::vector<GridPoint>& positive_grid() {
  static const std::vector<GridPoint> grid = [] {
    std::vector<GridPoint> g;
    for (std::uint32_t b = 0; b <= 0x7BFF; ++b)
      g.push_back({decode_half(Half{static_cast<std::uint16_t>(b)}),
                   static_cast<std::uint16_t>(b)});
    return g;
  }();
  return grid;
}

// Reference round-to-nearest-even by explicit bracketing on the value grid.
// Midpoints are exact: adjacent grid values differ by a power of two and
// carry at most 11 significant bits, so lo + gap/2 needs at most 12.
std::uint16_t oracle_encode(double x) {
  const std::uint16_t sign = std::signbit(x) ? 0x8000 : 0;
  const double a = std::fabs(x);
  if (a >= 65520.0) return sign | 0x7C00;
  const auto& g = positive_grid();
  auto it = std::upper_bound(g.begin(), g.end(), a,
                             [](double v, const GridPoint& p) { return v < p.value; });
  if (it == g.end()) return sign | 0x7BFF;  // (65504, 65520): below the overflow midpoint
  if (it == g.begin()) return sign;          // a == 0.0
  const GridPoint hi = *it;
  const GridPoint lo = *(it - 1);
  const double mid = lo.value + (hi.value - lo.value) * 0.5;
  std::uint16_t mag;
  if (a < mid)
    mag = lo.bits;
  else if (a > mid)
    mag = hi.bits;
  else
    mag = (lo.bits & 1) == 0 ? lo.bits : hi.bits;
  return sign | mag;
}

}  // namespace

TEST_SUITE("half") {
  TEST_CASE("decode known patterns") {
    CHECK(decode_half(Half{0x0000}) == 0.0);
    CHECK(!std::signbit(decode_half(Half{0x0000})));
    CHECK(decode_half(Half{0x8000}) == 0.0);
    CHECK(std::signbit(decode_half(Half{0x8000})));
    CHECK(decode_half(Half{0x3C00}) == 1.0);
    CHECK(decode_half(Half{0xC000}) == -2.0);
    CHECK(decode_half(Half{0x7BFF}) == 65504.0);
    CHECK(decode_half(Half{0x0001}) == 0x1p-24);
    CHECK(decode_half(Half{0x03FF}) == 0x1p-14 - 0x1p-24);  // largest subnormal
    CHECK(decode_half(Half{0x0400}) == 0x1p-14);            // smallest normal
    CHECK(decode_half(Half{0x3555}) == 0.333251953125);
    CHECK(decode_half(Half{0x7C00}) == HUGE_VAL);
    CHECK(decode_half(Half{0xFC00}) == -HUGE_VAL);
    CHECK(std::isnan(decode_half(Half{0x7E00})));
    CHECK(std::isnan(decode_half(Half{0xFFFF})));
  }

  TEST_CASE("encode known values") {
    CHECK(encode_half(1.0).bits == 0x3C00);
    CHECK(encode_half(0.0).bits == 0x0000);
    CHECK(encode_half(-0.0).bits == 0x8000);
    CHECK(encode_half(0.1).bits == 0x2E66);
    CHECK(encode_half(65504.0).bits == 0x7BFF);
    CHECK(encode_half(1.0 / 3.0).bits == 0x3555);
    CHECK(encode_half(-2.0).bits == 0xC000);
    CHECK(encode_half(0x1p-24).bits == 0x0001);
    CHECK(encode_half(0x1p-14).bits == 0x0400);
  }

  TEST_CASE("overflow rounds to infinity at the 65520 midpoint") {
    CHECK(encode_half(65519.999).bits == 0x7BFF);
    CHECK(encode_half(65520.0).bits == 0x7C00);
    CHECK(encode_half(-65520.0).bits == 0xFC00);
    CHECK(encode_half(1e300).bits == 0x7C00);
    CHECK(encode_half(HUGE_VAL).bits == 0x7C00);
    CHECK(encode_half(-HUGE_VAL).bits == 0xFC00);
  }

  TEST_CASE("ties go to the even mantissa") {
    // 2049 lies halfway between 2048 (0x6800) and 2050 (0x6801).
    CHECK(encode_half(2049.0).bits == 0x6800);
    // 2051 lies halfway between 2050 (0x6801) and 2052 (0x6802).
    CHECK(encode_half(2051.0).bits == 0x6802);
    // 2^-25 lies halfway between 0 and the smallest subnormal.
    CHECK(encode_half(0x1p-25).bits == 0x0000);
    CHECK(encode_half(-0x1p-25).bits == 0x8000);
    CHECK(encode_half(0x1.0000000000001p-25).bits == 0x0001);
    // 3*2^-25 lies halfway between subnormals 1 and 2.
    CHECK(encode_half(0x1.8p-24).bits == 0x0002);
  }

  TEST_CASE("NaN input is rejected") {
    CHECK_THROWS_AS(encode_half(std::nan("")), ddm::Error);
    try {
      encode_half(std::nan(""));
    } catch (const ddm::Error& e) {
      CHECK(e.code() == ddm::Errc::NanInput);
    }
  }

  TEST_CASE("exhaustive round-trip over all finite patterns") {
    int checked = 0;
    for (std::uint32_t b = 0; b < 0x10000; ++b) {
      const auto h = Half{static_cast<std::uint16_t>(b)};
      if ((b & 0x7C00) == 0x7C00) continue;  // infinities and NaNs
      const double d = decode_half(h);
      CHECK(encode_half(d).bits == h.bits);
      ++checked;
    }
    CHECK(checked == 0x10000 - 2048);
  }

  TEST_CASE("encode agrees with the grid-bracketing oracle on 200k samples") {
    ddm::Xoshiro256 rng(2024);
    for (int i = 0; i < 200000; ++i) {
      // Exponents span below-subnormal through past-overflow territory.
      const int e = static_cast<int>(rng.next_below(46)) - 28;
      const double mant = 1.0 + rng.next_double53();
      const double sign = rng.next_below(2) == 0 ? 1.0 : -1.0;
      const double x = sign * std::ldexp(mant, e);
      const std::uint16_t expect = oracle_encode(x);
      CHECK(encode_half(x).bits == expect);
    }
  }

  TEST_CASE("encode agrees with the oracle at exact midpoints") {
    const auto& g = positive_grid();
    ddm::Xoshiro256 rng(77);
    for (int i = 0; i < 20000; ++i) {
      const std::size_t k = 1 + rng.next_below(g.size() - 1);
      const double lo = g[k - 1].value;
      const double hi = g[k].value;
      const double mid = lo + (hi - lo) * 0.5;
      CHECK(encode_half(mid).bits == oracle_encode(mid));
      CHECK(encode_half(-mid).bits == oracle_encode(-mid));
    }
  }

  TEST_CASE("monotone over a sorted million-point sweep") {
    ddm::Xoshiro256 rng(9);
    std::vector<double> xs;
    xs.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
      const int e = static_cast<int>(rng.next_below(46)) - 28;
      const double sign = rng.next_below(2) == 0 ? 1.0 : -1.0;
      xs.push_back(sign * std::ldexp(1.0 + rng.next_double53(), e));
    }
    std::sort(xs.begin(), xs.end());
    double prev = decode_half(encode_half(xs.front()));
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double cur = decode_half(encode_half(xs[i]));
      CHECK(prev <= cur);
      prev = cur;
    }
  }

  TEST_CASE("half-ulp relative error bound in the normal range") {
    ddm::Xoshiro256 rng(31);
    for (int i = 0; i < 100000; ++i) {
      const int e = static_cast<int>(rng.next_below(30)) - 14;  // [2^-14, 2^16)
      const double x = std::ldexp(1.0 + rng.next_double53(), e);
      if (x > 65504.0) continue;
      const double back = decode_half(encode_half(x));
      CHECK(std::fabs(back - x) <= std::ldexp(std::fabs(x), -11));
    }
  }
}
