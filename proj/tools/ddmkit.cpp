// ddmkit: generate, inspect, convert, multiply and benchmark dose-deposition
// matrices from the command line. Every command that takes --seed is
// deterministic in the artifacts it writes (timing columns excepted).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ddm/bench.hpp"
#include "ddm/checksum.hpp"
#include "ddm/error.hpp"
#include "ddm/io.hpp"
#include "ddm/matgen.hpp"
#include "ddm/perf_model.hpp"
#include "ddm/sparse.hpp"
#include "ddm/spmv.hpp"

namespace {

ddm::ValuePrecision to_precision(const std::string& s) {
  if (s == "half") return ddm::ValuePrecision::Half;
  if (s == "single") return ddm::ValuePrecision::Single;
  return ddm::ValuePrecision::Double;
}

ddm::IndexWidth to_width(int bits) {
  return bits == 16 ? ddm::IndexWidth::U16 : ddm::IndexWidth::U32;
}

ddm::CsrMatrix load_matrix(const std::string& path, const std::string& format,
                           ddm::ValuePrecision precision, ddm::IndexWidth width) {
  std::string fmt = format;
  if (fmt == "auto")
    fmt = std::filesystem::path(path).extension() == ".mtx" ? "mtx" : "ddm";
  if (fmt == "mtx") return ddm::read_matrix_market(path, precision, width);
  return ddm::read_ddm(path);
}

struct GenArgs {
  std::string profile;
  std::string profile_file;
  std::string output;
  std::string precision = "half";
  int index_width = 0;  // 0: narrowest that fits
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int run_gen(const GenArgs& a) {
  ddm::MatrixProfile profile;
  if (!a.profile.empty()) {
    auto named = ddm::named_profile(a.profile);
    if (!named) {
      std::string known;
      for (auto n : ddm::named_profile_list()) known += fmt::format(" {}", n);
      fmt::print(stderr, "error: unknown profile '{}'; known profiles:{}\n", a.profile, known);
      return 1;
    }
    profile = *named;
  } else {
    std::ifstream in(a.profile_file);
    if (!in) {
      fmt::print(stderr, "error: cannot open profile file '{}'\n", a.profile_file);
      return 1;
    }
    profile = ddm::parse_profile(in);
  }
  if (a.seed_set) profile.seed = a.seed;

  std::optional<ddm::IndexWidth> width;
  if (a.index_width != 0) width = to_width(a.index_width);
  const ddm::CsrMatrix m = ddm::generate(profile, to_precision(a.precision), width);
  ddm::write_ddm(m, std::filesystem::path(a.output));
  fmt::print("wrote {}: {} x {}, nnz {}, {}/{} (seed {})\n", a.output, m.rows, m.cols, m.nnz(),
             ddm::name(m.precision()), ddm::name(m.index_width), profile.seed);
  return 0;
}

struct StatsArgs {
  std::string matrix;
  std::string format = "auto";
  bool csv = false;
};

int run_stats(const StatsArgs& a) {
  const ddm::CsrMatrix m =
      load_matrix(a.matrix, a.format, ddm::ValuePrecision::Double, ddm::IndexWidth::U32);
  const ddm::RowStats stats = ddm::compute_stats(m);

  if (a.csv) {
    fmt::print("row_length,cumulative_fraction\n");
    for (const auto& [len, frac] : stats.cumulative) fmt::print("{},{}\n", len, frac);
    fmt::print("\nmean_nnz_per_nonempty_row,frac_nonempty_below_32,empty_row_fraction\n");
    fmt::print("{},{},{}\n",
               stats.mean_nnz_per_nonempty_row ? fmt::format("{}", *stats.mean_nnz_per_nonempty_row) : "",
               stats.frac_nonempty_below_32 ? fmt::format("{}", *stats.frac_nonempty_below_32) : "",
               stats.empty_row_fraction);
    return 0;
  }

  fmt::print("{} x {}, nnz {} (ratio {:.6f})\n", m.rows, m.cols, m.nnz(), stats.nnz_ratio);
  fmt::print("{:>10}  {:>19}\n", "row_length", "cumulative_fraction");
  for (const auto& [len, frac] : stats.cumulative) fmt::print("{:>10}  {:>19.6f}\n", len, frac);
  fmt::print("mean nnz per non-empty row: {}\n",
             stats.mean_nnz_per_nonempty_row ? fmt::format("{:.3f}", *stats.mean_nnz_per_nonempty_row)
                                             : "n/a");
  fmt::print("non-empty rows shorter than 32: {}\n",
             stats.frac_nonempty_below_32 ? fmt::format("{:.4f}", *stats.frac_nonempty_below_32)
                                          : "n/a");
  fmt::print("empty-row fraction: {:.4f}\n", stats.empty_row_fraction);
  return 0;
}

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string format = "auto";
  std::string precision;    // empty: keep source precision
  int index_width = 0;      // 0: keep source width
};

int run_convert(const ConvertArgs& a) {
  const ddm::CsrMatrix in =
      load_matrix(a.input, a.format, ddm::ValuePrecision::Double, ddm::IndexWidth::U32);
  const ddm::ValuePrecision precision =
      a.precision.empty() ? in.precision() : to_precision(a.precision);
  const ddm::IndexWidth width = a.index_width == 0 ? in.index_width : to_width(a.index_width);
  const ddm::CsrMatrix out = ddm::coo_to_csr(ddm::csr_to_coo(in), precision, width);
  ddm::write_ddm(out, std::filesystem::path(a.output));
  fmt::print("wrote {}: {} x {}, nnz {}, {}/{}\n", a.output, out.rows, out.cols, out.nnz(),
             ddm::name(out.precision()), ddm::name(out.index_width));
  return 0;
}

struct SpmvArgs {
  std::string matrix;
  std::string format = "auto";
  std::string vector_path;
  std::string output;
  std::string engine = "rowchunk";
  std::size_t lane_width = 32;
  std::size_t chunk_count = 1;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
};

int run_spmv(const SpmvArgs& a) {
  const ddm::CsrMatrix m =
      load_matrix(a.matrix, a.format, ddm::ValuePrecision::Half, ddm::IndexWidth::U32);
  const ddm::DenseVector x = a.vector_path.empty()
                                 ? ddm::seeded_vector(m.cols, a.seed)
                                 : ddm::read_vector(std::filesystem::path(a.vector_path));
  ddm::DenseVector y;
  const auto algorithm = ddm::parse_algorithm(a.engine);
  if (!algorithm) {
    fmt::print(stderr, "error: unknown engine '{}'\n", a.engine);
    return 1;
  }
  switch (*algorithm) {
    case ddm::Algorithm::Oracle: y = ddm::spmv_oracle(m, x); break;
    case ddm::Algorithm::RowChunk:
      y = ddm::spmv_rowchunk(m, x, {.lane_width = a.lane_width, .workers = a.workers});
      break;
    case ddm::Algorithm::Scatter:
      y = ddm::spmv_scatter_baseline(ddm::csr_to_csc(m), x,
                                     {.chunk_count = a.chunk_count, .workers = a.workers});
      break;
  }
  if (!a.output.empty()) ddm::write_vector(y, std::filesystem::path(a.output));
  fmt::print("checksum {:016x}\n", ddm::checksum_bits(y));
  return 0;
}

struct BenchArgs {
  std::string matrix;
  std::string format = "auto";
  std::string label;
  std::string algorithm = "rowchunk";
  std::size_t lane_width = 0;   // 0: sweep
  std::size_t chunk_count = 0;  // 0: sweep
  std::size_t workers = 0;      // 0: sweep
  std::uint64_t reps = 100;
  std::uint64_t warmup = 3;
  std::uint64_t seed = 42;
  bool csv = false;
};

int run_bench_cmd(const BenchArgs& a) {
  const ddm::CsrMatrix m =
      load_matrix(a.matrix, a.format, ddm::ValuePrecision::Half, ddm::IndexWidth::U32);
  const auto algorithm = ddm::parse_algorithm(a.algorithm);
  if (!algorithm) {
    fmt::print(stderr, "error: unknown algorithm '{}'\n", a.algorithm);
    return 1;
  }
  ddm::BenchConfig base;
  base.algorithm = *algorithm;
  base.repetitions = a.reps;
  base.warmup = a.warmup;
  base.vector_seed = a.seed;

  std::vector<std::size_t> widths;
  if (*algorithm == ddm::Algorithm::Scatter) {
    if (a.chunk_count != 0) widths = {a.chunk_count};
  } else if (a.lane_width != 0) {
    widths = {a.lane_width};
  }
  std::vector<std::size_t> workers;
  if (a.workers != 0) workers = {a.workers};

  const std::string label =
      a.label.empty() ? std::filesystem::path(a.matrix).stem().string() : a.label;
  const auto reports = ddm::run_sweep(m, label, base, widths, workers);
  fmt::print("{}", a.csv ? ddm::render_csv(reports) : ddm::render_table(reports));
  return 0;
}

struct RooflineArgs {
  std::string matrix;
  std::string format = "auto";
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t nnz = 0;
  double peak_gflops = 9400.0;  // A100 FP64 tensor peak
  double peak_gbps = 1555.0;    // A100 HBM2e bandwidth
  std::string machine = "A100";
  std::string layout = "all";
  bool csv = false;
};

int run_roofline(const RooflineArgs& a) {
  ddm::MatrixDims dims;
  if (!a.matrix.empty()) {
    const ddm::CsrMatrix m =
        load_matrix(a.matrix, a.format, ddm::ValuePrecision::Half, ddm::IndexWidth::U32);
    dims = ddm::dims_of(m);
  } else {
    dims = {.nr = a.rows, .nc = a.cols, .nnz = a.nnz};
  }
  const ddm::MachineSpec machine{.peak_flops = a.peak_gflops * 1e9,
                                 .peak_bandwidth = a.peak_gbps * 1e9,
                                 .name = a.machine};

  struct NamedLayout {
    const char* name;
    ddm::LayoutBytes bytes;
  };
  // half-double is the mixed mode: binary16 values, double vectors. single
  // is the all-float32 pipeline the mixed mode is compared against.
  const std::vector<NamedLayout> all = {
      {"half-double", {.value_bytes = 2, .col_index_bytes = 4, .row_ptr_bytes = 4, .out_bytes = 8, .in_bytes = 8}},
      {"single", {.value_bytes = 4, .col_index_bytes = 4, .row_ptr_bytes = 4, .out_bytes = 4, .in_bytes = 4}},
      {"double", {.value_bytes = 8, .col_index_bytes = 4, .row_ptr_bytes = 4, .out_bytes = 8, .in_bytes = 8}},
  };
  std::vector<NamedLayout> selected;
  for (const auto& l : all)
    if (a.layout == "all" || a.layout == l.name) selected.push_back(l);
  if (selected.empty()) {
    fmt::print(stderr, "error: unknown layout '{}'\n", a.layout);
    return 1;
  }

  // Evaluate every row before printing so a bad spec never leaves a partial
  // table behind.
  struct Row {
    NamedLayout layout;
    double oi, memory_ceiling, compute_ceiling, attainable;
    const char* regime;
  };
  std::vector<Row> rows;
  for (const auto& l : selected) {
    const ddm::TrafficModel t = ddm::traffic(dims, l.bytes);
    const double oi = ddm::operational_intensity(t);
    const double memory_ceiling = oi * machine.peak_bandwidth * 1e-9;
    const double compute_ceiling = machine.peak_flops * 1e-9;
    const double attainable = ddm::roofline_bound(oi, machine) * 1e-9;
    rows.push_back({l, oi, memory_ceiling, compute_ceiling, attainable,
                    memory_ceiling < compute_ceiling ? "memory-bound" : "compute-bound"});
  }

  if (a.csv)
    fmt::print("machine,layout,value_bytes,col_index_bytes,row_ptr_bytes,out_bytes,in_bytes,"
               "oi,memory_ceiling_gflops,compute_ceiling_gflops,attainable_gflops,regime\n");
  else
    fmt::print("{} ({} GFLOP/s peak, {} GB/s peak), {} x {}, nnz {}\n{:<12} {:>7} {:>10} {:>10} {:>10}  {}\n",
               machine.name, a.peak_gflops, a.peak_gbps, dims.nr, dims.nc, dims.nnz, "layout",
               "oi", "mem_gfs", "comp_gfs", "attain", "regime");

  for (const Row& r : rows) {
    if (a.csv)
      fmt::print("{},{},{},{},{},{},{},{},{},{},{},{}\n", machine.name, r.layout.name,
                 r.layout.bytes.value_bytes, r.layout.bytes.col_index_bytes,
                 r.layout.bytes.row_ptr_bytes, r.layout.bytes.out_bytes, r.layout.bytes.in_bytes,
                 r.oi, r.memory_ceiling, r.compute_ceiling, r.attainable, r.regime);
    else
      fmt::print("{:<12} {:>7.4f} {:>10.2f} {:>10.2f} {:>10.2f}  {}\n", r.layout.name, r.oi,
                 r.memory_ceiling, r.compute_ceiling, r.attainable, r.regime);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dose-deposition-matrix SpMV toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> precisions = {"half", "single", "double"};
  const std::vector<int> widths = {16, 32};
  const std::vector<std::string> formats = {"auto", "ddm", "mtx"};

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic matrix from a profile");
  auto* profile_opt = gen_cmd->add_option("--profile", gen.profile, "named profile");
  gen_cmd->add_option("--profile-file", gen.profile_file, "key=value profile file")
      ->excludes(profile_opt);
  gen_cmd->add_option("-o,--output", gen.output, "output DDM path")->required();
  gen_cmd->add_option("--precision", gen.precision)->check(CLI::IsMember(precisions));
  gen_cmd->add_option("--index-width", gen.index_width)->check(CLI::IsMember(widths));
  gen_cmd->add_option("--seed", gen.seed)->each([&gen](const std::string&) { gen.seed_set = true; });

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "row-length distribution report");
  stats_cmd->add_option("matrix", stats.matrix, "matrix path")->required();
  stats_cmd->add_option("--format", stats.format)->check(CLI::IsMember(formats));
  stats_cmd->add_flag("--csv", stats.csv);

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "re-encode a matrix (precision, width, format)");
  convert_cmd->add_option("input", convert.input)->required();
  convert_cmd->add_option("output", convert.output)->required();
  convert_cmd->add_option("--format", convert.format, "input format")->check(CLI::IsMember(formats));
  convert_cmd->add_option("--precision", convert.precision)->check(CLI::IsMember(precisions));
  convert_cmd->add_option("--index-width", convert.index_width)->check(CLI::IsMember(widths));

  SpmvArgs spmv;
  auto* spmv_cmd = app.add_subcommand("spmv", "multiply a matrix by a vector");
  spmv_cmd->add_option("matrix", spmv.matrix)->required();
  spmv_cmd->add_option("--format", spmv.format)->check(CLI::IsMember(formats));
  spmv_cmd->add_option("--vector", spmv.vector_path, "input vector (one double per line)");
  spmv_cmd->add_option("-o,--output", spmv.output, "output vector path");
  spmv_cmd->add_option("--engine", spmv.engine)->check(CLI::IsMember({"oracle", "rowchunk", "scatter"}));
  spmv_cmd->add_option("--lane-width", spmv.lane_width);
  spmv_cmd->add_option("--chunk-count", spmv.chunk_count);
  spmv_cmd->add_option("--workers", spmv.workers);
  spmv_cmd->add_option("--seed", spmv.seed, "seed for a generated input vector");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "timed configuration sweep");
  bench_cmd->add_option("matrix", bench.matrix)->required();
  bench_cmd->add_option("--format", bench.format)->check(CLI::IsMember(formats));
  bench_cmd->add_option("--label", bench.label);
  bench_cmd->add_option("--algorithm", bench.algorithm)
      ->check(CLI::IsMember({"oracle", "rowchunk", "scatter"}));
  bench_cmd->add_option("--lane-width", bench.lane_width, "fix the lane width (default: sweep)");
  bench_cmd->add_option("--chunk-count", bench.chunk_count, "fix the chunk count (default: sweep)");
  bench_cmd->add_option("--workers", bench.workers, "fix the worker count (default: sweep)");
  bench_cmd->add_option("--reps", bench.reps);
  bench_cmd->add_option("--warmup", bench.warmup);
  bench_cmd->add_option("--seed", bench.seed, "input-vector seed");
  bench_cmd->add_flag("--csv", bench.csv);

  RooflineArgs roofline;
  auto* roof_cmd = app.add_subcommand("roofline", "analytic ceilings for a machine and layout");
  auto* roof_matrix = roof_cmd->add_option("--matrix", roofline.matrix, "take dims from a matrix");
  roof_cmd->add_option("--format", roofline.format)->check(CLI::IsMember(formats));
  roof_cmd->add_option("--rows", roofline.rows)->excludes(roof_matrix);
  roof_cmd->add_option("--cols", roofline.cols)->excludes(roof_matrix);
  roof_cmd->add_option("--nnz", roofline.nnz)->excludes(roof_matrix);
  roof_cmd->add_option("--peak-gflops", roofline.peak_gflops);
  roof_cmd->add_option("--peak-gbps", roofline.peak_gbps);
  roof_cmd->add_option("--machine", roofline.machine);
  roof_cmd->add_option("--layout", roofline.layout)
      ->check(CLI::IsMember({"all", "half-double", "single", "double"}));
  roof_cmd->add_flag("--csv", roofline.csv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      if (gen.profile.empty() && gen.profile_file.empty()) {
        fmt::print(stderr, "error: gen needs --profile or --profile-file\n");
        return 1;
      }
      return run_gen(gen);
    }
    if (stats_cmd->parsed()) return run_stats(stats);
    if (convert_cmd->parsed()) return run_convert(convert);
    if (spmv_cmd->parsed()) return run_spmv(spmv);
    if (bench_cmd->parsed()) return run_bench_cmd(bench);
    if (roof_cmd->parsed()) return run_roofline(roofline);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
