#include "ddm/spmv.hpp"

#include <array>
#include <bit>
#include <thread>
#include <vector>

#include "ddm/error.hpp"

namespace ddm {

namespace {

// Run fn(begin, end) over contiguous blocks of [0, n) on `workers` threads.
// Block boundaries depend only on (n, workers); callers must keep the work
// for disjoint blocks independent so scheduling cannot affect results.
template <class Fn>
void parallel_blocks(std::uint64_t n, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    fn(std::uint64_t{0}, n);
    return;
  }
  const std::size_t used = static_cast<std::size_t>(std::min<std::uint64_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    const std::uint64_t begin = n * w / used;
    const std::uint64_t end = n * (w + 1) / used;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

void check_dims(std::uint64_t expected_cols, std::size_t x_len) {
  if (x_len != expected_cols)
    fail(Errc::DimensionMismatch, "input vector length " + std::to_string(x_len) +
                                      " != matrix columns " + std::to_string(expected_cols));
}

void check_rowchunk_config(const RowChunkConfig& cfg) {
  if (cfg.lane_width < 1 || cfg.lane_width > kMaxLaneWidth ||
      !std::has_single_bit(cfg.lane_width))
    fail(Errc::InvalidConfig,
         "lane_width must be a power of two in [1, 1024], got " + std::to_string(cfg.lane_width));
  if (cfg.workers < 1) fail(Errc::InvalidConfig, "workers must be >= 1");
}

template <class V>
void rowchunk_rows(const CsrMatrix& m, std::span<const V> vals, const DenseVector& x,
                   std::size_t lane_width, DenseVector& y, std::uint64_t row_begin,
                   std::uint64_t row_end) {
  std::array<double, kMaxLaneWidth> partial;
  for (std::uint64_t i = row_begin; i < row_end; ++i) {
    const std::uint64_t start = m.row_ptr[i];
    const std::uint64_t end = m.row_ptr[i + 1];
    if (start == end) continue;  // empty row: y[i] stays 0.0

    for (std::size_t l = 0; l < lane_width; ++l) {
      double acc = 0.0;
      for (std::uint64_t j = start + l; j < end; j += lane_width)
        acc += widen(vals[j]) * x[m.col_indices[j]];
      partial[l] = acc;
    }
    for (std::size_t w = lane_width / 2; w >= 1; w /= 2)
      for (std::size_t l = 0; l < w; ++l) partial[l] += partial[l + w];
    y[i] = partial[0];
  }
}

template <class V>
void scatter_chunk(const CscMatrix& m, std::span<const V> vals, const DenseVector& x,
                   std::uint64_t col_begin, std::uint64_t col_end, DenseVector& scratch) {
  for (std::uint64_t c = col_begin; c < col_end; ++c) {
    const double xc = x[c];
    for (std::uint64_t j = m.col_ptr[c]; j < m.col_ptr[c + 1]; ++j)
      scratch[m.row_indices[j]] += xc * widen(vals[j]);
  }
}

}  // namespace

DenseVector spmv_oracle(const CsrMatrix& m, const DenseVector& x) {
  check_dims(m.cols, x.size());
  DenseVector y(m.rows, 0.0);
  std::visit(
      [&](const auto& vals) {
        for (std::uint64_t i = 0; i < m.rows; ++i) {
          double acc = 0.0;
          for (std::uint64_t j = m.row_ptr[i]; j < m.row_ptr[i + 1]; ++j)
            acc += widen(vals[j]) * x[m.col_indices[j]];
          y[i] = acc;
        }
      },
      m.values.data());
  return y;
}

DenseVector spmv_rowchunk(const CsrMatrix& m, const DenseVector& x, const RowChunkConfig& cfg) {
  check_dims(m.cols, x.size());
  check_rowchunk_config(cfg);
  DenseVector y(m.rows, 0.0);
  std::visit(
      [&](const auto& vals) {
        using V = std::decay_t<decltype(vals[0])>;
        parallel_blocks(m.rows, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
          rowchunk_rows<V>(m, vals, x, cfg.lane_width, y, begin, end);
        });
      },
      m.values.data());
  return y;
}

DenseVector spmv_scatter_baseline(const CscMatrix& m, const DenseVector& x,
                                  const ScatterConfig& cfg) {
  check_dims(m.cols, x.size());
  if (cfg.chunk_count < 1) fail(Errc::InvalidConfig, "chunk_count must be >= 1");
  if (cfg.workers < 1) fail(Errc::InvalidConfig, "workers must be >= 1");

  const std::uint64_t chunks = cfg.chunk_count;
  // 128-bit intermediate so the boundary formula cannot overflow for any
  // (cols, chunk_count) pair.
  auto boundary = [&](std::uint64_t c) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(m.cols) * c / chunks);
  };
  std::vector<DenseVector> scratch(chunks);

  std::visit(
      [&](const auto& vals) {
        using V = std::decay_t<decltype(vals[0])>;
        parallel_blocks(chunks, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
          for (std::uint64_t c = begin; c < end; ++c) {
            scratch[c].assign(m.rows, 0.0);
            scatter_chunk<V>(m, vals, x, boundary(c), boundary(c + 1), scratch[c]);
          }
        });
      },
      m.values.data());

  // Merge in chunk-index order; rows are independent, so the merge itself can
  // be split across workers without affecting any bit of the result.
  DenseVector y(m.rows, 0.0);
  parallel_blocks(m.rows, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (std::uint64_t c = 0; c < chunks; ++c) acc += scratch[c][i];
      y[i] = acc;
    }
  });
  return y;
}

}  // namespace ddm
