#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddm/perf_model.hpp"
#include "ddm/sparse.hpp"
#include "ddm/spmv.hpp"

namespace ddm {

enum class Algorithm { Oracle, RowChunk, Scatter };

const char* name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct BenchConfig {
  Algorithm algorithm = Algorithm::RowChunk;
  std::size_t lane_width = 32;   // rowchunk only
  std::size_t chunk_count = 1;   // scatter only
  std::size_t workers = 1;
  std::uint64_t repetitions = 100;
  std::uint64_t warmup = 3;
  std::uint64_t vector_seed = 42;
};

/// One timed configuration. The three throughput fields are coupled:
/// operational_intensity is the perf-model value for the matrix layout
/// verbatim, effective_gbps is model traffic over mean elapsed time, and
/// gflops is stored as their product so the roofline identity
/// gflops == oi * gbps holds bit-for-bit in every row.
struct BenchReport {
  std::string matrix_label;
  Algorithm algorithm = Algorithm::RowChunk;
  ValuePrecision precision = ValuePrecision::Half;
  std::size_t lane_width = 0;
  std::size_t chunk_count = 0;
  std::size_t workers = 0;
  std::uint64_t repetitions = 0;
  double mean_seconds = 0.0;
  double min_seconds = 0.0;
  double gflops = 0.0;
  double effective_gbps = 0.0;
  double operational_intensity = 0.0;
  std::uint64_t output_checksum = 0;
};

/// Deterministic uniform [0,1) input vector for benchmarking.
DenseVector seeded_vector(std::uint64_t n, std::uint64_t seed);

/// Warm-up runs (excluded), then cfg.repetitions timed runs. Every
/// repetition's output checksum must match the first; a mismatch means a
/// broken reproducibility contract and throws ValidationFailure. Throws
/// InvalidConfig when repetitions is 0 and ZeroDuration when the clock
/// cannot resolve the runs.
BenchReport run_bench(const CsrMatrix& m, std::string_view label, const BenchConfig& cfg);

/// One report per (lane_width | chunk_count, workers) combination in the
/// given sweep lists; empty lists select the defaults below.
std::vector<BenchReport> run_sweep(const CsrMatrix& m, std::string_view label,
                                   const BenchConfig& base, std::span<const std::size_t> widths,
                                   std::span<const std::size_t> worker_counts);

/// {32, 64, ..., 1024} for rowchunk, {1, 2, 4, 8} for scatter.
std::vector<std::size_t> default_width_sweep(Algorithm a);
/// {1, 2, 4, ..., hardware concurrency}.
std::vector<std::size_t> default_worker_sweep();

std::string render_csv(std::span<const BenchReport> reports);
std::string render_table(std::span<const BenchReport> reports);

}  // namespace ddm
