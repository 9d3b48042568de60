#include "ddm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ddm/error.hpp"

namespace ddm {

const char* name(ValuePrecision p) {
  switch (p) {
    case ValuePrecision::Half: return "half";
    case ValuePrecision::Single: return "single";
    case ValuePrecision::Double: return "double";
  }
  return "?";
}

const char* name(IndexWidth w) { return w == IndexWidth::U16 ? "u16" : "u32"; }

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::IndexOverflow: return "IndexOverflow";
    case Errc::ValueOverflow: return "ValueOverflow";
    case Errc::NanInput: return "NanInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ZeroTraffic: return "ZeroTraffic";
    case Errc::ZeroDuration: return "ZeroDuration";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::ValidationFailure: return "ValidationFailure";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::ParseError: return "ParseError";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::InconsistentProfile: return "InconsistentProfile";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Error";
}

ValueStore ValueStore::from_doubles(std::span<const double> xs, ValuePrecision p) {
  switch (p) {
    case ValuePrecision::Half: {
      std::vector<Half> out(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isinf(xs[i])) fail(Errc::ValueOverflow, "infinite value");
        out[i] = encode_half(xs[i]);  // throws NanInput on NaN
        if (half_is_inf(out[i]))
          fail(Errc::ValueOverflow, "value " + std::to_string(xs[i]) + " exceeds binary16 range");
      }
      return ValueStore(std::move(out));
    }
    case ValuePrecision::Single: {
      std::vector<float> out(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(xs[i])) fail(Errc::NanInput, "cannot store NaN");
        out[i] = static_cast<float>(xs[i]);
        if (std::isinf(out[i]))
          fail(Errc::ValueOverflow, "value " + std::to_string(xs[i]) + " exceeds binary32 range");
      }
      return ValueStore(std::move(out));
    }
    case ValuePrecision::Double: {
      for (double x : xs) {
        if (std::isnan(x)) fail(Errc::NanInput, "cannot store NaN");
        if (std::isinf(x)) fail(Errc::ValueOverflow, "infinite value");
      }
      return ValueStore(std::vector<double>(xs.begin(), xs.end()));
    }
  }
  fail(Errc::InvalidConfig, "unknown precision");
}

ValueStore ValueStore::empty_with_precision(ValuePrecision p) {
  switch (p) {
    case ValuePrecision::Half: return ValueStore(std::vector<Half>{});
    case ValuePrecision::Single: return ValueStore(std::vector<float>{});
    case ValuePrecision::Double: return ValueStore(std::vector<double>{});
  }
  fail(Errc::InvalidConfig, "unknown precision");
}

std::size_t ValueStore::size() const {
  return std::visit([](const auto& v) { return v.size(); }, data_);
}

double ValueStore::get(std::size_t i) const {
  return std::visit([i](const auto& v) { return widen(v[i]); }, data_);
}

bool bits_equal(const ValueStore& a, const ValueStore& b) {
  if (a.precision() != b.precision() || a.size() != b.size()) return false;
  return std::visit(
      [&](const auto& va) {
        using Vec = std::decay_t<decltype(va)>;
        const auto& vb = std::get<Vec>(b.data());
        return va.empty() ||
               std::memcmp(va.data(), vb.data(), va.size() * sizeof(va[0])) == 0;
      },
      a.data());
}

namespace {

void check_index_width(std::uint64_t cols, IndexWidth width) {
  if (width == IndexWidth::U16 && cols >= kU16ColumnLimit)
    fail(Errc::IndexOverflow,
         "u16 column indices require fewer than 65536 columns, got " + std::to_string(cols));
}

}  // namespace

CsrMatrix coo_to_csr(const CooMatrix& m, ValuePrecision precision, IndexWidth index_width) {
  check_index_width(m.cols, index_width);

  std::vector<CooEntry> sorted = m.entries;
  for (const CooEntry& e : sorted) {
    if (e.row >= m.rows || e.col >= m.cols)
      fail(Errc::ValidationFailure, "entry (" + std::to_string(e.row) + "," +
                                        std::to_string(e.col) + ") outside " +
                                        std::to_string(m.rows) + "x" + std::to_string(m.cols));
  }
  std::sort(sorted.begin(), sorted.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].row == sorted[i - 1].row && sorted[i].col == sorted[i - 1].col)
      fail(Errc::DuplicateEntry, "duplicate entry at (" + std::to_string(sorted[i].row) + "," +
                                     std::to_string(sorted[i].col) + ")");
  }

  CsrMatrix out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.index_width = index_width;
  out.row_ptr.assign(m.rows + 1, 0);
  for (const CooEntry& e : sorted) ++out.row_ptr[e.row + 1];
  for (std::uint64_t r = 0; r < m.rows; ++r) out.row_ptr[r + 1] += out.row_ptr[r];

  out.col_indices.resize(sorted.size());
  std::vector<double> vals(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.col_indices[i] = static_cast<std::uint32_t>(sorted[i].col);
    vals[i] = sorted[i].value;
  }
  out.values = ValueStore::from_doubles(vals, precision);
  return out;
}

CooMatrix csr_to_coo(const CsrMatrix& m) {
  CooMatrix out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.entries.reserve(m.nnz());
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    for (std::uint64_t j = m.row_ptr[r]; j < m.row_ptr[r + 1]; ++j) {
      out.entries.push_back({r, m.col_indices[j], m.values.get(j)});
    }
  }
  return out;
}

CscMatrix csr_to_csc(const CsrMatrix& m) {
  CscMatrix out;
  out.rows = m.rows;
  out.cols = m.cols;
  const std::uint64_t nnz = m.nnz();
  out.col_ptr.assign(m.cols + 1, 0);
  for (std::uint64_t j = 0; j < nnz; ++j) ++out.col_ptr[m.col_indices[j] + 1];
  for (std::uint64_t c = 0; c < m.cols; ++c) out.col_ptr[c + 1] += out.col_ptr[c];

  out.row_indices.resize(nnz);
  std::vector<std::uint64_t> next(out.col_ptr.begin(), out.col_ptr.end() - 1);

  // Rows are walked in ascending order, so row indices within each column come
  // out strictly increasing. Value bits are permuted in their native type.
  std::visit(
      [&](const auto& vals) {
        using Vec = std::decay_t<decltype(vals)>;
        Vec permuted(nnz);
        for (std::uint64_t r = 0; r < m.rows; ++r) {
          for (std::uint64_t j = m.row_ptr[r]; j < m.row_ptr[r + 1]; ++j) {
            const std::uint64_t pos = next[m.col_indices[j]]++;
            out.row_indices[pos] = static_cast<std::uint32_t>(r);
            permuted[pos] = vals[j];
          }
        }
        out.values = ValueStore(std::move(permuted));
      },
      m.values.data());
  return out;
}

ValidationReport validate(const CsrMatrix& m) {
  ValidationReport report;
  auto flag = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (m.row_ptr.size() != m.rows + 1) {
    flag("row_ptr length " + std::to_string(m.row_ptr.size()) + ", expected rows+1 = " +
         std::to_string(m.rows + 1));
    return report;  // remaining checks would index out of bounds
  }
  if (m.row_ptr.front() != 0) flag("row_ptr[0] != 0");
  bool monotone = true;
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    if (m.row_ptr[r + 1] < m.row_ptr[r]) {
      flag("row_ptr decreases at row " + std::to_string(r));
      monotone = false;
      break;
    }
  }
  const std::uint64_t nnz = m.row_ptr.back();
  if (m.col_indices.size() != nnz)
    flag("col_indices length " + std::to_string(m.col_indices.size()) + " != row_ptr[rows] = " +
         std::to_string(nnz));
  if (m.values.size() != m.col_indices.size())
    flag("values length " + std::to_string(m.values.size()) + " != col_indices length " +
         std::to_string(m.col_indices.size()));
  if (m.index_width == IndexWidth::U16 && m.cols >= kU16ColumnLimit)
    flag("u16 index width with " + std::to_string(m.cols) + " columns");

  if (monotone && m.col_indices.size() == nnz) {
    for (std::uint64_t r = 0; r < m.rows; ++r) {
      for (std::uint64_t j = m.row_ptr[r]; j < m.row_ptr[r + 1]; ++j) {
        if (m.col_indices[j] >= m.cols) {
          flag("column index " + std::to_string(m.col_indices[j]) + " out of range at row " +
               std::to_string(r));
          return report;
        }
        if (j > m.row_ptr[r] && m.col_indices[j] <= m.col_indices[j - 1]) {
          flag("column indices not strictly increasing in row " + std::to_string(r));
          return report;
        }
      }
    }
  }

  // NaN is physically meaningless as a dose and infinities break the
  // engines' accuracy contract, so neither belongs in a valid matrix.
  if (m.values.size() == m.col_indices.size()) {
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      if (!std::isfinite(m.values.get(i))) {
        flag("non-finite value at position " + std::to_string(i));
        break;
      }
    }
  }
  return report;
}

}  // namespace ddm
