#include "ddm/perf_model.hpp"

#include <algorithm>

#include "ddm/error.hpp"

namespace ddm {

namespace {

void check_layout(const LayoutBytes& l) {
  auto in = [](std::uint32_t v, std::initializer_list<std::uint32_t> allowed) {
    for (std::uint32_t a : allowed)
      if (v == a) return true;
    return false;
  };
  if (!in(l.value_bytes, {2, 4, 8}) || !in(l.col_index_bytes, {2, 4}) ||
      !in(l.row_ptr_bytes, {4, 8}) || !in(l.out_bytes, {4, 8}) || !in(l.in_bytes, {4, 8}))
    fail(Errc::InvalidConfig, "unsupported layout byte widths");
}

void check_dims(const MatrixDims& d) {
  if (static_cast<unsigned __int128>(d.nnz) >
      static_cast<unsigned __int128>(d.nr) * d.nc)
    fail(Errc::InvalidConfig, "nnz exceeds rows*cols");
}

}  // namespace

LayoutBytes layout_for(ValuePrecision p, IndexWidth w, std::uint32_t row_ptr_bytes,
                       std::uint32_t vector_bytes) {
  LayoutBytes l;
  l.value_bytes = static_cast<std::uint32_t>(byte_width(p));
  l.col_index_bytes = static_cast<std::uint32_t>(byte_width(w));
  l.row_ptr_bytes = row_ptr_bytes;
  l.out_bytes = vector_bytes;
  l.in_bytes = vector_bytes;
  return l;
}

LayoutBytes layout_of(const CsrMatrix& m) { return layout_for(m.precision(), m.index_width, 8, 8); }

MatrixDims dims_of(const CsrMatrix& m) { return {m.rows, m.cols, m.nnz()}; }

TrafficModel traffic(const MatrixDims& dims, const LayoutBytes& layout) {
  check_dims(dims);
  check_layout(layout);
  TrafficModel t;
  t.bytes_nnz_term = (layout.value_bytes + layout.col_index_bytes) * dims.nnz;
  t.bytes_row_term = (layout.row_ptr_bytes + layout.out_bytes) * dims.nr;
  t.bytes_col_term = layout.in_bytes * dims.nc;
  t.flops = 2 * dims.nnz;
  return t;
}

double operational_intensity(const TrafficModel& t) {
  const std::uint64_t total = t.total_bytes();
  if (total == 0) fail(Errc::ZeroTraffic, "traffic model has zero bytes");
  return static_cast<double>(t.flops) / static_cast<double>(total);
}

double roofline_bound(double oi, const MachineSpec& machine) {
  if (!(oi > 0.0)) fail(Errc::InvalidConfig, "operational intensity must be positive");
  if (!(machine.peak_flops > 0.0) || !(machine.peak_bandwidth > 0.0))
    fail(Errc::InvalidConfig, "machine peaks must be positive");
  return std::min(machine.peak_flops, oi * machine.peak_bandwidth);
}

std::uint64_t storage_size(const MatrixDims& dims, const LayoutBytes& layout) {
  check_dims(dims);
  check_layout(layout);
  return (layout.value_bytes + layout.col_index_bytes) * dims.nnz +
         layout.row_ptr_bytes * (dims.nr + 1);
}

AchievedMetrics achieved_metrics(const MatrixDims& dims, const LayoutBytes& layout,
                                 double elapsed_seconds) {
  if (!(elapsed_seconds > 0.0)) fail(Errc::ZeroDuration, "elapsed time must be positive");
  const TrafficModel t = traffic(dims, layout);
  AchievedMetrics a;
  a.gflops = static_cast<double>(t.flops) / elapsed_seconds * 1e-9;
  a.effective_gbps = static_cast<double>(t.total_bytes()) / elapsed_seconds * 1e-9;
  return a;
}

}  // namespace ddm
