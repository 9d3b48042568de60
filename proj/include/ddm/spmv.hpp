#pragma once

#include <cstddef>

#include "ddm/sparse.hpp"

namespace ddm {

inline constexpr std::size_t kMaxLaneWidth = 1024;

/// Lane-group engine configuration. lane_width is the number of lanes that
/// cooperate on one row (power of two, 1..1024); workers is the number of
/// parallel executors distributed over rows. Output bits never depend on
/// workers, only on lane_width.
struct RowChunkConfig {
  std::size_t lane_width = 32;
  std::size_t workers = 1;
};

/// Scatter-baseline configuration. chunk_count fixes the static column
/// partition (and therefore the result bits); workers only schedules it.
struct ScatterConfig {
  std::size_t chunk_count = 1;
  std::size_t workers = 1;
};

/// Definitional reference: sequential, row-major, strictly left-to-right
/// accumulation in double precision.
DenseVector spmv_oracle(const CsrMatrix& m, const DenseVector& x);

/// Lane-group-per-row CSR SpMV. Lane l accumulates the products at positions
/// row_start + l, row_start + l + lane_width, ... in increasing order, then
/// the lane partials are combined by a stride-halving binary tree:
///   partial[l] += partial[l + w]   for w = lane_width/2, ..., 1.
/// All products and sums are double precision regardless of the stored value
/// precision. Empty rows leave the output at 0.0.
DenseVector spmv_rowchunk(const CsrMatrix& m, const DenseVector& x, const RowChunkConfig& cfg);

/// Column-chunked scatter engine modeled on per-thread scratch accumulation.
/// Columns are split into chunk_count contiguous ranges (boundaries a pure
/// function of cols and chunk_count); each chunk scatters into a private
/// scratch vector in column-major order, and scratches are summed into the
/// output in chunk-index order.
DenseVector spmv_scatter_baseline(const CscMatrix& m, const DenseVector& x,
                                  const ScatterConfig& cfg);

}  // namespace ddm
