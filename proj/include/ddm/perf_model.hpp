#pragma once

#include <cstdint>
#include <string>

#include "ddm/sparse.hpp"

namespace ddm {

struct MatrixDims {
  std::uint64_t nr = 0;   // rows (voxels)
  std::uint64_t nc = 0;   // columns (spots)
  std::uint64_t nnz = 0;  // stored non-zeros
};

/// Per-element byte widths of one SpMV pass: value and column index are paid
/// per non-zero, row pointer and output per row, input per column.
struct LayoutBytes {
  std::uint32_t value_bytes = 2;
  std::uint32_t col_index_bytes = 4;
  std::uint32_t row_ptr_bytes = 4;
  std::uint32_t out_bytes = 8;
  std::uint32_t in_bytes = 8;
};

/// Byte-traffic decomposition of one SpMV under the infinite-cache
/// assumption (every byte loaded from main memory exactly once), plus the
/// FLOP count of 2 per non-zero.
struct TrafficModel {
  std::uint64_t bytes_nnz_term = 0;
  std::uint64_t bytes_row_term = 0;
  std::uint64_t bytes_col_term = 0;
  std::uint64_t flops = 0;

  std::uint64_t total_bytes() const { return bytes_nnz_term + bytes_row_term + bytes_col_term; }
};

struct MachineSpec {
  double peak_flops = 0.0;      // FLOP/s
  double peak_bandwidth = 0.0;  // bytes/s
  std::string name;
};

struct AchievedMetrics {
  double gflops = 0.0;
  double effective_gbps = 0.0;  // model traffic over elapsed time, in GB/s
};

/// Layout for a stored precision and index width. Row-pointer width defaults
/// to the 4-byte modeling assumption; vector_bytes covers input and output.
LayoutBytes layout_for(ValuePrecision p, IndexWidth w, std::uint32_t row_ptr_bytes = 4,
                       std::uint32_t vector_bytes = 8);

/// Layout describing this library's in-memory engine (8-byte row pointers,
/// double vectors).
LayoutBytes layout_of(const CsrMatrix& m);

MatrixDims dims_of(const CsrMatrix& m);

TrafficModel traffic(const MatrixDims& dims, const LayoutBytes& layout);

/// FLOPs per byte of traffic; upper bound given the infinite-cache model.
/// Throws Errc::ZeroTraffic when the model has no bytes.
double operational_intensity(const TrafficModel& t);

/// min(peak compute, oi * peak bandwidth). Requires oi > 0 and a valid spec.
double roofline_bound(double oi, const MachineSpec& machine);

/// Resident bytes of the CSR structure: values and column indices per
/// non-zero plus nr+1 row pointers.
std::uint64_t storage_size(const MatrixDims& dims, const LayoutBytes& layout);

/// GFLOP/s and effective GB/s for one timed SpMV. Effective bandwidth is the
/// model traffic divided by elapsed time, not a hardware counter.
AchievedMetrics achieved_metrics(const MatrixDims& dims, const LayoutBytes& layout,
                                 double elapsed_seconds);

}  // namespace ddm
