#include "ddm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <fmt/format.h>

#include "ddm/checksum.hpp"
#include "ddm/error.hpp"
#include "ddm/rng.hpp"

namespace ddm {

const char* name(Algorithm a) {
  switch (a) {
    case Algorithm::Oracle: return "oracle";
    case Algorithm::RowChunk: return "rowchunk";
    case Algorithm::Scatter: return "scatter";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "oracle") return Algorithm::Oracle;
  if (s == "rowchunk") return Algorithm::RowChunk;
  if (s == "scatter") return Algorithm::Scatter;
  return std::nullopt;
}

DenseVector seeded_vector(std::uint64_t n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  DenseVector v(n);
  for (double& x : v) x = rng.next_double53();
  return v;
}

BenchReport run_bench(const CsrMatrix& m, std::string_view label, const BenchConfig& cfg) {
  if (cfg.repetitions == 0) fail(Errc::InvalidConfig, "repetitions must be at least 1");
  const DenseVector x = seeded_vector(m.cols, cfg.vector_seed);

  // The scatter engine consumes CSC; the conversion is part of setup, not of
  // the timed region, mirroring one-time transfer/packing costs.
  CscMatrix csc;
  if (cfg.algorithm == Algorithm::Scatter) csc = csr_to_csc(m);

  auto run_once = [&]() -> DenseVector {
    switch (cfg.algorithm) {
      case Algorithm::Oracle: return spmv_oracle(m, x);
      case Algorithm::RowChunk:
        return spmv_rowchunk(m, x, {.lane_width = cfg.lane_width, .workers = cfg.workers});
      case Algorithm::Scatter:
        return spmv_scatter_baseline(csc, x,
                                     {.chunk_count = cfg.chunk_count, .workers = cfg.workers});
    }
    fail(Errc::InvalidConfig, "unknown algorithm");
  };

  for (std::uint64_t i = 0; i < cfg.warmup; ++i) (void)run_once();

  using Clock = std::chrono::steady_clock;
  double total_seconds = 0.0;
  double min_seconds = 0.0;
  std::uint64_t checksum = 0;
  for (std::uint64_t rep = 0; rep < cfg.repetitions; ++rep) {
    const auto t0 = Clock::now();
    const DenseVector y = run_once();
    const auto t1 = Clock::now();
    const double elapsed = std::chrono::duration<double>(t1 - t0).count();
    total_seconds += elapsed;
    min_seconds = rep == 0 ? elapsed : std::min(min_seconds, elapsed);
    const std::uint64_t sum = checksum_bits(y);
    if (rep == 0)
      checksum = sum;
    else if (sum != checksum)
      fail(Errc::ValidationFailure,
           fmt::format("output checksum changed between repetitions ({:016x} vs {:016x})", checksum,
                       sum));
  }

  const double mean_seconds = total_seconds / static_cast<double>(cfg.repetitions);
  if (!(mean_seconds > 0.0)) fail(Errc::ZeroDuration, "timed region below clock resolution");

  const TrafficModel model = traffic(dims_of(m), layout_of(m));
  const double oi = operational_intensity(model);
  const double gbps = static_cast<double>(model.total_bytes()) / mean_seconds * 1e-9;

  BenchReport r;
  r.matrix_label = std::string(label);
  r.algorithm = cfg.algorithm;
  r.precision = m.precision();
  r.lane_width = cfg.algorithm == Algorithm::RowChunk ? cfg.lane_width : 0;
  r.chunk_count = cfg.algorithm == Algorithm::Scatter ? cfg.chunk_count : 0;
  r.workers = cfg.workers;
  r.repetitions = cfg.repetitions;
  r.mean_seconds = mean_seconds;
  r.min_seconds = min_seconds;
  r.operational_intensity = oi;
  r.effective_gbps = gbps;
  r.gflops = oi * gbps;
  r.output_checksum = checksum;
  return r;
}

std::vector<BenchReport> run_sweep(const CsrMatrix& m, std::string_view label,
                                   const BenchConfig& base, std::span<const std::size_t> widths,
                                   std::span<const std::size_t> worker_counts) {
  std::vector<std::size_t> width_list(widths.begin(), widths.end());
  if (width_list.empty()) width_list = default_width_sweep(base.algorithm);
  std::vector<std::size_t> worker_list(worker_counts.begin(), worker_counts.end());
  if (worker_list.empty()) worker_list = default_worker_sweep();

  std::vector<BenchReport> reports;
  for (std::size_t width : width_list) {
    for (std::size_t workers : worker_list) {
      BenchConfig cfg = base;
      cfg.workers = workers;
      if (base.algorithm == Algorithm::Scatter)
        cfg.chunk_count = width;
      else
        cfg.lane_width = width;
      reports.push_back(run_bench(m, label, cfg));
    }
  }
  return reports;
}

std::vector<std::size_t> default_width_sweep(Algorithm a) {
  if (a == Algorithm::Scatter) return {1, 2, 4, 8};
  if (a == Algorithm::Oracle) return {1};
  return {32, 64, 128, 256, 512, 1024};
}

std::vector<std::size_t> default_worker_sweep() {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::size_t> list;
  for (std::size_t w = 1; w <= hw; w *= 2) list.push_back(w);
  return list;
}

std::string render_csv(std::span<const BenchReport> reports) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out),
                 "matrix,algorithm,precision,lane_width,chunk_count,workers,repetitions,"
                 "mean_seconds,min_seconds,gflops,effective_gbps,operational_intensity,"
                 "output_checksum\n");
  for (const BenchReport& r : reports)
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{},{},{},{},{},{:016x}\n",
                   r.matrix_label, name(r.algorithm), name(r.precision), r.lane_width,
                   r.chunk_count, r.workers, r.repetitions, r.mean_seconds, r.min_seconds,
                   r.gflops, r.effective_gbps, r.operational_intensity, r.output_checksum);
  return fmt::to_string(out);
}

std::string render_table(std::span<const BenchReport> reports) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "{:<14} {:<8} {:<6} {:>5} {:>5} {:>3} {:>5} {:>11} {:>11} {:>9} {:>9} {:>6}  {:<16}\n",
                 "matrix", "algo", "prec", "lane", "chunk", "wk", "reps", "mean_s", "min_s",
                 "gflops", "gbps", "oi", "checksum");
  for (const BenchReport& r : reports)
    fmt::format_to(std::back_inserter(out),
                   "{:<14} {:<8} {:<6} {:>5} {:>5} {:>3} {:>5} {:>11.4e} {:>11.4e} {:>9.3f} {:>9.3f} {:>6.3f}  {:016x}\n",
                   r.matrix_label, name(r.algorithm), name(r.precision), r.lane_width,
                   r.chunk_count, r.workers, r.repetitions, r.mean_seconds, r.min_seconds,
                   r.gflops, r.effective_gbps, r.operational_intensity, r.output_checksum);
  return fmt::to_string(out);
}

}  // namespace ddm
