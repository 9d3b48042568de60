#include "ddm/io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "ddm/error.hpp"

namespace ddm {
namespace {

constexpr std::array<char, 4> kMagic = {'D', 'D', 'M', '1'};
constexpr std::uint8_t kVersion = 1;

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out) fail(Errc::IoFailure, "write failed");
}

void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

void put_uint_le(std::ostream& out, std::uint64_t v, std::size_t width) {
  std::array<unsigned char, 8> buf;
  for (std::size_t i = 0; i < width; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, buf.data(), width);
}

void get_bytes(std::istream& in, void* p, std::size_t n, const char* what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    fail(Errc::TruncatedFile, std::string("unexpected end of data while reading ") + what);
}

std::uint64_t get_uint_le(std::istream& in, std::size_t width, const char* what) {
  std::array<unsigned char, 8> buf;
  get_bytes(in, buf.data(), width, what);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) fail(Errc::IoFailure, "cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_ddm(const CsrMatrix& m, std::ostream& out) {
  const ValidationReport report = validate(m);
  if (!report.ok)
    fail(Errc::ValidationFailure, "refusing to write invalid matrix: " + report.violations.front());

  put_bytes(out, kMagic.data(), kMagic.size());
  put_u8(out, kVersion);
  put_u8(out, static_cast<std::uint8_t>(m.precision()));
  put_u8(out, static_cast<std::uint8_t>(byte_width(m.index_width)));
  put_u8(out, 0);
  put_uint_le(out, m.rows, 8);
  put_uint_le(out, m.cols, 8);
  put_uint_le(out, m.nnz(), 8);
  for (std::uint64_t p : m.row_ptr) put_uint_le(out, p, 8);
  const std::size_t iw = byte_width(m.index_width);
  for (std::uint32_t c : m.col_indices) put_uint_le(out, c, iw);
  switch (m.precision()) {
    case ValuePrecision::Half:
      for (Half h : m.values.as<Half>()) put_uint_le(out, h.bits, 2);
      break;
    case ValuePrecision::Single:
      for (float v : m.values.as<float>()) put_uint_le(out, std::bit_cast<std::uint32_t>(v), 4);
      break;
    case ValuePrecision::Double:
      for (double v : m.values.as<double>()) put_uint_le(out, std::bit_cast<std::uint64_t>(v), 8);
      break;
  }
  out.flush();
  if (!out) fail(Errc::IoFailure, "write failed");
}

void write_ddm(const CsrMatrix& m, const std::filesystem::path& path) {
  auto out = open_output(path, std::ios::binary);
  write_ddm(m, out);
}

CsrMatrix read_ddm(std::istream& in) {
  std::array<char, 4> magic;
  get_bytes(in, magic.data(), magic.size(), "magic");
  if (magic != kMagic) fail(Errc::BadMagic, "not a DDM file");
  const auto version = static_cast<std::uint8_t>(get_uint_le(in, 1, "version"));
  if (version != kVersion)
    fail(Errc::UnsupportedVersion, fmt::format("DDM version {} (expected {})", version, kVersion));
  const auto precision_byte = get_uint_le(in, 1, "precision");
  if (precision_byte > 2)
    fail(Errc::ValidationFailure, fmt::format("bad precision byte {}", precision_byte));
  const auto index_byte = get_uint_le(in, 1, "index width");
  if (index_byte != 2 && index_byte != 4)
    fail(Errc::ValidationFailure, fmt::format("bad index-width byte {}", index_byte));
  const auto reserved = get_uint_le(in, 1, "reserved byte");
  if (reserved != 0)
    fail(Errc::ValidationFailure, fmt::format("reserved byte is {}, expected 0", reserved));

  CsrMatrix m;
  m.rows = get_uint_le(in, 8, "row count");
  m.cols = get_uint_le(in, 8, "column count");
  const std::uint64_t nnz = get_uint_le(in, 8, "nnz");
  m.index_width = index_byte == 2 ? IndexWidth::U16 : IndexWidth::U32;
  const auto precision = static_cast<ValuePrecision>(precision_byte);

  // Cheap plausibility bound before any allocation: sections of 2^53+
  // elements cannot come from a real file.
  if (m.rows >= (1ull << 53) || nnz >= (1ull << 53))
    fail(Errc::ValidationFailure, "header-implied size is implausible");

  m.row_ptr.resize(m.rows + 1);
  for (std::uint64_t r = 0; r <= m.rows; ++r) m.row_ptr[r] = get_uint_le(in, 8, "row pointer");

  m.col_indices.resize(nnz);
  for (std::uint64_t i = 0; i < nnz; ++i)
    m.col_indices[i] = static_cast<std::uint32_t>(get_uint_le(in, index_byte, "column index"));

  switch (precision) {
    case ValuePrecision::Half: {
      std::vector<Half> vals(nnz);
      for (auto& h : vals)
        h.bits = static_cast<std::uint16_t>(get_uint_le(in, 2, "value"));
      m.values = ValueStore(std::move(vals));
      break;
    }
    case ValuePrecision::Single: {
      std::vector<float> vals(nnz);
      for (auto& v : vals)
        v = std::bit_cast<float>(static_cast<std::uint32_t>(get_uint_le(in, 4, "value")));
      m.values = ValueStore(std::move(vals));
      break;
    }
    case ValuePrecision::Double: {
      std::vector<double> vals(nnz);
      for (auto& v : vals) v = std::bit_cast<double>(get_uint_le(in, 8, "value"));
      m.values = ValueStore(std::move(vals));
      break;
    }
  }

  if (in.peek() != std::istream::traits_type::eof())
    fail(Errc::ValidationFailure, "trailing bytes past the header-implied end of file");

  const ValidationReport report = validate(m);
  if (!report.ok) fail(Errc::ValidationFailure, "decoded matrix invalid: " + report.violations.front());
  return m;
}

CsrMatrix read_ddm(const std::filesystem::path& path) {
  auto in = open_input(path, std::ios::binary);
  return read_ddm(in);
}

namespace {

struct MmHeader {
  bool symmetric = false;
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  fail(Errc::ParseError, fmt::format("line {}: {}", line_no, msg));
}

MmHeader parse_mm_banner(const std::string& line, std::size_t line_no) {
  std::istringstream tokens(line);
  std::string tag, object, format, field, symmetry;
  tokens >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket") parse_fail(line_no, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") parse_fail(line_no, "banner object must be 'matrix'");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate")
    fail(Errc::UnsupportedFeature, "only coordinate-format Matrix Market files are supported");
  if (field == "complex" || field == "pattern")
    fail(Errc::UnsupportedFeature, "field '" + field + "' is not supported");
  if (field != "real" && field != "integer") parse_fail(line_no, "unknown field '" + field + "'");
  if (symmetry == "skew-symmetric" || symmetry == "hermitian")
    fail(Errc::UnsupportedFeature, "symmetry '" + symmetry + "' is not supported");
  if (symmetry != "general" && symmetry != "symmetric")
    parse_fail(line_no, "unknown symmetry '" + symmetry + "'");
  return {.symmetric = symmetry == "symmetric"};
}

double parse_double_token(const std::string& tok, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    parse_fail(line_no, "bad numeric literal '" + tok + "'");
  if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL))
    parse_fail(line_no, "numeric literal out of range '" + tok + "'");
  return v;
}

std::uint64_t parse_index_token(const std::string& tok, std::size_t line_no) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    parse_fail(line_no, "bad index '" + tok + "'");
  errno = 0;
  const unsigned long long v = std::strtoull(tok.c_str(), nullptr, 10);
  if (errno == ERANGE) parse_fail(line_no, "index out of range '" + tok + "'");
  return v;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in, ValuePrecision precision, IndexWidth index_width) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(1, "empty file");
  ++line_no;
  const MmHeader header = parse_mm_banner(line, line_no);

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (line[line.find_first_not_of(" \t\r")] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line()) parse_fail(line_no, "missing size line");
  CooMatrix coo;
  std::uint64_t declared_nnz = 0;
  {
    std::istringstream tokens(line);
    std::string a, b, c, extra;
    tokens >> a >> b >> c;
    if (tokens >> extra) parse_fail(line_no, "size line has trailing tokens");
    if (c.empty()) parse_fail(line_no, "size line needs rows, cols, nnz");
    coo.rows = parse_index_token(a, line_no);
    coo.cols = parse_index_token(b, line_no);
    declared_nnz = parse_index_token(c, line_no);
  }

  for (std::uint64_t seen = 0; seen < declared_nnz; ++seen) {
    if (!next_content_line())
      parse_fail(line_no, fmt::format("expected {} entries, found {}", declared_nnz, seen));
    std::istringstream tokens(line);
    std::string a, b, c, extra;
    tokens >> a >> b >> c;
    if (tokens >> extra) parse_fail(line_no, "entry line has trailing tokens");
    if (c.empty()) parse_fail(line_no, "entry line needs row, col, value");
    const std::uint64_t row1 = parse_index_token(a, line_no);
    const std::uint64_t col1 = parse_index_token(b, line_no);
    if (row1 == 0 || row1 > coo.rows) parse_fail(line_no, "row index out of range");
    if (col1 == 0 || col1 > coo.cols) parse_fail(line_no, "column index out of range");
    const double value = parse_double_token(c, line_no);
    coo.entries.push_back({row1 - 1, col1 - 1, value});
    if (header.symmetric && row1 != col1) coo.entries.push_back({col1 - 1, row1 - 1, value});
  }
  if (next_content_line()) parse_fail(line_no, "more entries than the size line declares");

  return coo_to_csr(coo, precision, index_width);
}

CsrMatrix read_matrix_market(const std::filesystem::path& path, ValuePrecision precision,
                             IndexWidth index_width) {
  auto in = open_input(path, std::ios::in);
  return read_matrix_market(in, precision, index_width);
}

DenseVector read_vector(std::istream& in) {
  DenseVector v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    v.push_back(parse_double_token(line.substr(first, last - first + 1), line_no));
  }
  return v;
}

DenseVector read_vector(const std::filesystem::path& path) {
  auto in = open_input(path, std::ios::in);
  return read_vector(in);
}

void write_vector(const DenseVector& v, std::ostream& out) {
  fmt::memory_buffer buf;
  for (double x : v) fmt::format_to(std::back_inserter(buf), "{}\n", x);
  put_bytes(out, buf.data(), buf.size());
  out.flush();
  if (!out) fail(Errc::IoFailure, "write failed");
}

void write_vector(const DenseVector& v, const std::filesystem::path& path) {
  auto out = open_output(path, std::ios::out);
  write_vector(v, out);
}

}  // namespace ddm
