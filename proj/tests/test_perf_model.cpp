#include <cmath>
#include <cstdint>

#include <doctest.h>

#include "ddm/error.hpp"
#include "ddm/perf_model.hpp"
#include "ddm/rng.hpp"
#include "test_helpers.hpp"

using namespace ddm;
using namespace ddmtest;

namespace {

// Table I of the source material: rows, cols, nnz, size in GB (1e9 bytes).
struct TableRow {
  const char* label;
  std::uint64_t nr;
  std::uint64_t nc;
  std::uint64_t nnz;
  double size_gb;
};

constexpr TableRow kTable[] = {
    {"liver-1", 2970000, 68000, 1480000000, 8.880},
    {"liver-2", 2970000, 67700, 1280000000, 7.672},
    {"liver-3", 2970000, 69900, 1390000000, 8.368},
    {"liver-4", 2970000, 63200, 1840000000, 11.04},
    {"prostate-1", 1030000, 5090, 95000000, 0.5744},
    {"prostate-2", 1030000, 4960, 95100000, 0.5747},
};

constexpr MatrixDims kLiver1 = {kTable[0].nr, kTable[0].nc, kTable[0].nnz};
constexpr LayoutBytes kHalfDouble = {2, 4, 4, 8, 8};
constexpr LayoutBytes kAllSingle = {4, 4, 4, 4, 4};

}  // namespace

TEST_SUITE("perf") {
  TEST_CASE("traffic decomposition on tiny dims") {
    const TrafficModel t = traffic({.nr = 3, .nc = 5, .nnz = 7}, kHalfDouble);
    CHECK(t.bytes_nnz_term == 6 * 7);
    CHECK(t.bytes_row_term == 12 * 3);
    CHECK(t.bytes_col_term == 8 * 5);
    CHECK(t.total_bytes() == 42 + 36 + 40);
    CHECK(t.flops == 14);
  }

  TEST_CASE("half-double traffic is exactly 6nnz + 12nr + 8nc on random dims") {
    Xoshiro256 rng(123);
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t nr = 1 + rng.next_below(4000000);
      const std::uint64_t nc = 1 + rng.next_below(80000);
      const std::uint64_t nnz = rng.next_below(nr * nc < 2000000000 ? nr * nc : 2000000000);
      const TrafficModel t = traffic({.nr = nr, .nc = nc, .nnz = nnz}, kHalfDouble);
      CHECK(t.total_bytes() == 6 * nnz + 12 * nr + 8 * nc);
      CHECK(t.flops == 2 * nnz);
    }
  }

  TEST_CASE("liver-1 operational intensity reproduces 0.332") {
    const double oi = operational_intensity(traffic(kLiver1, kHalfDouble));
    CHECK(std::fabs(oi - 0.332) <= 0.001);
  }

  TEST_CASE("single-layout OI is lower and matches its own formula") {
    const TrafficModel t = traffic(kLiver1, kAllSingle);
    const double oi = operational_intensity(t);
    const double expected = 2.0 * static_cast<double>(kLiver1.nnz) /
                            static_cast<double>(8 * kLiver1.nnz + 8 * kLiver1.nr + 4 * kLiver1.nc);
    CHECK(oi == expected);
    CHECK(std::fabs(oi - 0.2495) <= 0.0005);
    CHECK(oi < operational_intensity(traffic(kLiver1, kHalfDouble)));
  }

  TEST_CASE("operational intensity of an empty model throws ZeroTraffic") {
    try {
      operational_intensity(TrafficModel{});
      FAIL("expected ZeroTraffic");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroTraffic);
    }
  }

  TEST_CASE("invalid layouts and dims are rejected") {
    CHECK_THROWS_AS(traffic({.nr = 1, .nc = 1, .nnz = 1}, LayoutBytes{3, 4, 4, 8, 8}), Error);
    CHECK_THROWS_AS(traffic({.nr = 1, .nc = 1, .nnz = 1}, LayoutBytes{2, 3, 4, 8, 8}), Error);
    CHECK_THROWS_AS(traffic({.nr = 2, .nc = 2, .nnz = 5}, kHalfDouble), Error);
    CHECK_THROWS_AS(storage_size({.nr = 2, .nc = 2, .nnz = 5}, kHalfDouble), Error);
  }

  TEST_CASE("A100 roofline bound lands on the paper-derived ceiling") {
    const MachineSpec a100{.peak_flops = 9.4e12, .peak_bandwidth = 1555e9, .name = "A100"};
    const double oi = operational_intensity(traffic(kLiver1, kHalfDouble));
    const double bound = roofline_bound(oi, a100);
    CHECK(bound == oi * 1555e9);  // memory-bound regime
    CHECK(std::fabs(bound * 1e-9 - 516.3) <= 0.5);
  }

  TEST_CASE("roofline switches to the compute ceiling at high intensity") {
    const MachineSpec a100{.peak_flops = 9.4e12, .peak_bandwidth = 1555e9, .name = "A100"};
    CHECK(roofline_bound(100.0, a100) == 9.4e12);
    CHECK(roofline_bound(1e-6, a100) == 1e-6 * 1555e9);
  }

  TEST_CASE("roofline rejects non-positive inputs") {
    const MachineSpec a100{.peak_flops = 9.4e12, .peak_bandwidth = 1555e9, .name = "A100"};
    CHECK_THROWS_AS(roofline_bound(0.0, a100), Error);
    CHECK_THROWS_AS(roofline_bound(-1.0, a100), Error);
    CHECK_THROWS_AS(roofline_bound(0.332, MachineSpec{.peak_flops = 9.4e12, .peak_bandwidth = 0.0}),
                    Error);
    CHECK_THROWS_AS(roofline_bound(0.332, MachineSpec{.peak_flops = 0.0, .peak_bandwidth = 1e9}),
                    Error);
  }

  TEST_CASE("storage size matches all six published sizes within 1%") {
    for (const TableRow& row : kTable) {
      const std::uint64_t bytes =
          storage_size({.nr = row.nr, .nc = row.nc, .nnz = row.nnz}, kHalfDouble);
      const double gb = static_cast<double>(bytes) * 1e-9;
      CHECK(std::fabs(gb - row.size_gb) / row.size_gb <= 0.01);
    }
  }

  TEST_CASE("storage formula decomposition") {
    const std::uint64_t bytes = storage_size({.nr = 10, .nc = 4, .nnz = 9}, kHalfDouble);
    CHECK(bytes == 6 * 9 + 4 * 11);
  }

  TEST_CASE("layout helpers mirror matrix properties") {
    const CsrMatrix m = make_csr(3, 4, {{0, 1, 1.0}, {2, 3, 2.0}}, ValuePrecision::Half,
                                 IndexWidth::U16);
    const LayoutBytes l = layout_of(m);
    CHECK(l.value_bytes == 2);
    CHECK(l.col_index_bytes == 2);
    CHECK(l.row_ptr_bytes == 8);
    CHECK(l.out_bytes == 8);
    CHECK(l.in_bytes == 8);
    const MatrixDims d = dims_of(m);
    CHECK(d.nr == 3);
    CHECK(d.nc == 4);
    CHECK(d.nnz == 2);
    const LayoutBytes paper = layout_for(ValuePrecision::Half, IndexWidth::U32);
    CHECK(paper.row_ptr_bytes == 4);
    CHECK(paper.col_index_bytes == 4);
  }

  TEST_CASE("achieved metrics divide honestly and stay within 1 ulp of the OI identity") {
    const MatrixDims dims = {.nr = 1000, .nc = 500, .nnz = 20000};
    const double elapsed = 0.0037;
    const AchievedMetrics a = achieved_metrics(dims, kHalfDouble, elapsed);
    const TrafficModel t = traffic(dims, kHalfDouble);
    CHECK(a.gflops == static_cast<double>(t.flops) / elapsed * 1e-9);
    CHECK(a.effective_gbps == static_cast<double>(t.total_bytes()) / elapsed * 1e-9);
    const double oi = operational_intensity(t);
    CHECK(ulp_distance(a.gflops / a.effective_gbps, oi) <= 1);
  }

  TEST_CASE("achieved metrics reject a zero or negative duration") {
    const MatrixDims dims = {.nr = 10, .nc = 10, .nnz = 10};
    try {
      achieved_metrics(dims, kHalfDouble, 0.0);
      FAIL("expected ZeroDuration");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroDuration);
    }
    CHECK_THROWS_AS(achieved_metrics(dims, kHalfDouble, -1.0), Error);
  }
}
