#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddm/half.hpp"

namespace ddm {

enum class ValuePrecision : std::uint8_t { Half = 0, Single = 1, Double = 2 };
enum class IndexWidth : std::uint8_t { U16 = 0, U32 = 1 };

constexpr std::size_t byte_width(ValuePrecision p) {
  switch (p) {
    case ValuePrecision::Half: return 2;
    case ValuePrecision::Single: return 4;
    case ValuePrecision::Double: return 8;
  }
  return 0;
}

constexpr std::size_t byte_width(IndexWidth w) { return w == IndexWidth::U16 ? 2 : 4; }

// U16 column indices are only legal below this many columns.
inline constexpr std::uint64_t kU16ColumnLimit = 65536;

const char* name(ValuePrecision p);
const char* name(IndexWidth w);

inline double widen(Half h) { return decode_half(h); }
inline double widen(float v) { return static_cast<double>(v); }
inline double widen(double v) { return v; }

/// Precision-tagged value storage: one container for all three stored
/// precisions, widened to double only at access or compute time.
class ValueStore {
 public:
  using Variant = std::variant<std::vector<Half>, std::vector<float>, std::vector<double>>;

  ValueStore() = default;
  explicit ValueStore(std::vector<Half> v) : data_(std::move(v)) {}
  explicit ValueStore(std::vector<float> v) : data_(std::move(v)) {}
  explicit ValueStore(std::vector<double> v) : data_(std::move(v)) {}

  /// Convert doubles to the target precision with round-to-nearest-even.
  /// Throws Errc::NanInput on NaN and Errc::ValueOverflow when a value does
  /// not fit the target's finite range.
  static ValueStore from_doubles(std::span<const double> xs, ValuePrecision p);

  static ValueStore empty_with_precision(ValuePrecision p);

  ValuePrecision precision() const { return static_cast<ValuePrecision>(data_.index()); }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Exact widening of element i to double.
  double get(std::size_t i) const;

  template <class T>
  std::span<const T> as() const {
    return std::get<std::vector<T>>(data_);
  }

  const Variant& data() const { return data_; }
  Variant& data() { return data_; }

 private:
  Variant data_;
};

/// True when both stores hold the same precision and identical bit patterns
/// (unlike operator== on floats, distinguishes -0.0 from 0.0).
bool bits_equal(const ValueStore& a, const ValueStore& b);

struct CooEntry {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  double value = 0.0;

  friend bool operator==(const CooEntry&, const CooEntry&) = default;
};

struct CooMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<CooEntry> entries;
};

/// Compressed sparse row matrix. Canonical form: row_ptr[0] == 0,
/// non-decreasing, row_ptr[rows] == nnz; column indices strictly increasing
/// within each row (duplicates are construction errors, never summed).
/// Row pointers are 8-byte offsets regardless of IndexWidth so that
/// billion-scale nnz can never silently overflow.
struct CsrMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  IndexWidth index_width = IndexWidth::U32;
  std::vector<std::uint64_t> row_ptr;      // length rows + 1
  std::vector<std::uint32_t> col_indices;  // length nnz
  ValueStore values;                       // length nnz

  std::uint64_t nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
  ValuePrecision precision() const { return values.precision(); }
};

/// Column-compressed mirror of CsrMatrix; feeds the scatter baseline.
struct CscMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<std::uint64_t> col_ptr;      // length cols + 1
  std::vector<std::uint32_t> row_indices;  // length nnz
  ValueStore values;

  std::uint64_t nnz() const { return col_ptr.empty() ? 0 : col_ptr.back(); }
};

using DenseVector = std::vector<double>;

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Sort to canonical row-major order, reject duplicate (row, col) pairs, and
/// convert values to the target precision (round-to-nearest-even).
CsrMatrix coo_to_csr(const CooMatrix& m, ValuePrecision precision, IndexWidth index_width);

/// Entry list in row-major order; values widened to double exactly.
CooMatrix csr_to_coo(const CsrMatrix& m);

/// Transposed compression of the same entry set; value bits are copied, never
/// re-rounded.
CscMatrix csr_to_csc(const CsrMatrix& m);

/// Check every CsrMatrix invariant; reports violations instead of throwing.
ValidationReport validate(const CsrMatrix& m);

}  // namespace ddm
