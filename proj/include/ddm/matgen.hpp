#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ddm/sparse.hpp"

namespace ddm {

/// Statistical description of a dose-deposition matrix family. Non-empty row
/// lengths are modeled log-normal (heavy right tail); column indices cluster
/// inside a window to stand in for the spatial footprint of a spot.
struct MatrixProfile {
  std::uint64_t rows = 1;
  std::uint64_t cols = 1;
  double target_nnz_ratio = 0.0;
  double empty_row_fraction = 0.0;
  double row_length_log_mean = 0.0;
  double row_length_log_sigma = 0.0;
  std::uint64_t locality_window = 1;
  std::uint64_t seed = 0;
};

/// Desk-scale profile preserving the liver beam statistics that drive kernel
/// behavior: ~0.73% nnz ratio, ~70% empty rows, ~5.6% of non-empty rows
/// shorter than 32.
MatrixProfile liver_desk_profile();

/// Desk-scale prostate profile: ~1.81% nnz ratio, ~70% empty rows, ~14.2% of
/// non-empty rows shorter than 32.
MatrixProfile prostate_desk_profile();

std::optional<MatrixProfile> named_profile(std::string_view name);
std::vector<std::string_view> named_profile_list();

/// Parse a key=value profile file ('#' comments, blank lines allowed; keys
/// match the MatrixProfile field names). Unknown keys are errors.
MatrixProfile parse_profile(std::istream& in);

/// Throws Errc::InvalidConfig for out-of-range fields and
/// Errc::InconsistentProfile when the expected nnz ratio implied by the row
/// length distribution misses the target by more than 10%.
void validate_profile(const MatrixProfile& p);

/// Deterministic synthetic dose-deposition matrix: same profile and seed give
/// a bit-identical matrix. Draw order per row: empty test, length (one
/// normal), window center, index shuffle, then one value per entry in column
/// order. Values are uniform in [2^-14, 1] rounded to the target precision.
/// Index width defaults to the narrowest legal for cols.
CsrMatrix generate(const MatrixProfile& p, ValuePrecision precision = ValuePrecision::Half,
                   std::optional<IndexWidth> index_width = std::nullopt);

/// Measured row-length statistics of a concrete matrix. The cumulative
/// function and the summary fields follow the convention of excluding empty
/// rows; the histogram covers every row.
struct RowStats {
  std::map<std::uint64_t, std::uint64_t> row_length_histogram;
  std::vector<std::pair<std::uint64_t, double>> cumulative;  // (length, frac of non-empty <= length)
  std::optional<double> mean_nnz_per_nonempty_row;           // empty when no non-empty rows
  std::optional<double> frac_nonempty_below_32;
  double empty_row_fraction = 0.0;
  double nnz_ratio = 0.0;
};

RowStats compute_stats(const CsrMatrix& m);

}  // namespace ddm
