#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "ddm/checksum.hpp"
#include "ddm/error.hpp"
#include "ddm/io.hpp"
#include "ddm/matgen.hpp"
#include "ddm/sparse.hpp"
#include "test_helpers.hpp"

using namespace ddm;
using namespace ddmtest;

namespace {

std::string serialize(const CsrMatrix& m) {
  std::ostringstream out(std::ios::binary);
  write_ddm(m, out);
  return out.str();
}

CsrMatrix deserialize(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_ddm(in);
}

Errc read_error(const std::string& bytes) {
  try {
    deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected read_ddm to throw");
  return Errc::IoFailure;
}

void check_same_matrix(const CsrMatrix& a, const CsrMatrix& b) {
  CHECK(a.rows == b.rows);
  CHECK(a.cols == b.cols);
  CHECK(a.index_width == b.index_width);
  CHECK(a.row_ptr == b.row_ptr);
  CHECK(a.col_indices == b.col_indices);
  CHECK(bits_equal(a.values, b.values));
}

CsrMatrix parse_mtx(const std::string& text, ValuePrecision p = ValuePrecision::Double,
                    IndexWidth w = IndexWidth::U32) {
  std::istringstream in(text);
  return read_matrix_market(in, p, w);
}

Errc mtx_error(const std::string& text) {
  try {
    parse_mtx(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected read_matrix_market to throw");
  return Errc::IoFailure;
}

struct MmFixture {
  const char* name;
  const char* text;
  std::uint64_t rows;
  std::uint64_t cols;
  std::vector<CooEntry> oracle;  // hand-expanded entry list
};

const std::vector<MmFixture>& fixtures() {
  static const std::vector<MmFixture> fs = {
      {"identity3",
       "%%MatrixMarket matrix coordinate real general\n"
       "3 3 3\n"
       "1 1 1.0\n"
       "2 2 1.0\n"
       "3 3 1.0\n",
       3,
       3,
       {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}},
      {"two-entries",
       "%%MatrixMarket matrix coordinate real general\n"
       "% two scattered entries\n"
       "4 5 2\n"
       "1 2 3.5\n"
       "4 5 -1.25e1\n",
       4,
       5,
       {{0, 1, 3.5}, {3, 4, -12.5}}},
      {"symmetric",
       "%%MatrixMarket matrix coordinate real symmetric\n"
       "3 3 4\n"
       "1 1 2.0\n"
       "2 1 -3.0\n"
       "3 1 4.5\n"
       "3 3 1.0\n",
       3,
       3,
       {{0, 0, 2.0}, {1, 0, -3.0}, {0, 1, -3.0}, {2, 0, 4.5}, {0, 2, 4.5}, {2, 2, 1.0}}},
      {"integer-field",
       "%%MatrixMarket matrix coordinate integer general\n"
       "2 2 3\n"
       "1 1 3\n"
       "1 2 -7\n"
       "2 1 11\n",
       2,
       2,
       {{0, 0, 3.0}, {0, 1, -7.0}, {1, 0, 11.0}}},
      {"messy",
       "%%MatrixMarket matrix coordinate real general\n"
       "% written by hand\n"
       "4 6 5\n"
       "\n"
       "3 1 0.125\n"
       "1 6 1e-3\n"
       "% midway comment\n"
       "2 2 -4e2\n"
       "4 4 6.25e-2\n"
       "1 1 9\n",
       4,
       6,
       {{2, 0, 0.125}, {0, 5, 1e-3}, {1, 1, -4e2}, {3, 3, 6.25e-2}, {0, 0, 9.0}}},
  };
  return fs;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("ddm round-trip of identity(3) half U16 is bit-identical") {
    const CsrMatrix m = identity_csr(3, ValuePrecision::Half, IndexWidth::U16);
    const std::string bytes = serialize(m);
    const CsrMatrix back = deserialize(bytes);
    check_same_matrix(m, back);
    CHECK(serialize(back) == bytes);
  }

  TEST_CASE("ddm round-trips across all precisions and index widths") {
    for (const auto p : {ValuePrecision::Half, ValuePrecision::Single, ValuePrecision::Double}) {
      for (const auto w : {IndexWidth::U16, IndexWidth::U32}) {
        const CsrMatrix m = random_csr(37, 23, 0.15, 7 + static_cast<int>(p), p, w);
        const std::string bytes = serialize(m);
        const CsrMatrix back = deserialize(bytes);
        check_same_matrix(m, back);
        CHECK(serialize(back) == bytes);
      }
    }
  }

  TEST_CASE("ddm header layout is the documented fixed little-endian form") {
    const CsrMatrix m = identity_csr(2, ValuePrecision::Single, IndexWidth::U32);
    const std::string b = serialize(m);
    REQUIRE(b.size() == 32 + 3 * 8 + 2 * 4 + 2 * 4);
    CHECK(b.substr(0, 4) == "DDM1");
    CHECK(b[4] == 1);   // version
    CHECK(b[5] == 1);   // single precision
    CHECK(b[6] == 4);   // 4-byte column indices
    CHECK(b[7] == 0);   // reserved
    CHECK(static_cast<unsigned char>(b[8]) == 2);  // rows, little-endian u64
    CHECK(b.substr(9, 7) == std::string(7, '\0'));
  }

  TEST_CASE("ddm file round-trip through the filesystem") {
    const ScratchDir dir;
    MatrixProfile p = prostate_desk_profile();
    p.rows = 1200;  // desk-scale slice keeps the suite fast
    const CsrMatrix m = generate(p);
    const auto path = dir.file("prostate-slice.ddm");
    write_ddm(m, path);
    const CsrMatrix back = read_ddm(path);
    check_same_matrix(m, back);

    DenseVector widened(back.nnz());
    for (std::size_t i = 0; i < back.nnz(); ++i) widened[i] = back.values.get(i);
    DenseVector original(m.nnz());
    for (std::size_t i = 0; i < m.nnz(); ++i) original[i] = m.values.get(i);
    CHECK(checksum_bits(widened) == checksum_bits(original));
  }

  TEST_CASE("ddm reader rejects corruption with the right error codes") {
    const CsrMatrix m = random_csr(6, 5, 0.4, 17, ValuePrecision::Half, IndexWidth::U16);
    const std::string good = serialize(m);

    std::string bad = good;
    bad[0] = 'X';
    CHECK(read_error(bad) == Errc::BadMagic);

    bad = good;
    bad[4] = 2;
    CHECK(read_error(bad) == Errc::UnsupportedVersion);

    bad = good;
    bad[5] = 9;
    CHECK(read_error(bad) == Errc::ValidationFailure);

    bad = good;
    bad[6] = 3;
    CHECK(read_error(bad) == Errc::ValidationFailure);

    bad = good;
    bad[7] = 1;
    CHECK(read_error(bad) == Errc::ValidationFailure);

    for (const std::size_t cut : {std::size_t{2}, std::size_t{17}, std::size_t{40},
                                  good.size() - 1}) {
      bad = good.substr(0, cut);
      CHECK(read_error(bad) == Errc::TruncatedFile);
    }

    bad = good + '\0';
    CHECK(read_error(bad) == Errc::ValidationFailure);

    bad = good;
    bad[32 + 6 * 8] += 1;  // last row_ptr entry no longer equals nnz
    CHECK(read_error(bad) == Errc::ValidationFailure);
  }

  TEST_CASE("write_ddm refuses an invalid matrix") {
    CsrMatrix m = identity_csr(2);
    m.row_ptr = {0, 2, 1};
    std::ostringstream out;
    CHECK_THROWS_AS(write_ddm(m, out), Error);
  }

  TEST_CASE("matrix market fixtures match hand-built oracles") {
    for (const MmFixture& f : fixtures()) {
      CAPTURE(f.name);
      for (const auto p : {ValuePrecision::Half, ValuePrecision::Double}) {
        const CsrMatrix parsed = parse_mtx(f.text, p);
        CooMatrix oracle;
        oracle.rows = f.rows;
        oracle.cols = f.cols;
        oracle.entries = f.oracle;
        const CsrMatrix expected = coo_to_csr(oracle, p, IndexWidth::U32);
        check_same_matrix(parsed, expected);
      }
    }
  }

  TEST_CASE("matrix market error handling") {
    CHECK(mtx_error("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n") ==
          Errc::UnsupportedFeature);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n") ==
          Errc::UnsupportedFeature);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3.0\n") ==
          Errc::UnsupportedFeature);
    CHECK(mtx_error("%%MatrixMarket matrix array real general\n2 2\n1.0\n2.0\n3.0\n4.0\n") ==
          Errc::UnsupportedFeature);
    CHECK(mtx_error("% not a banner\n1 1 1\n1 1 1.0\n") == Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n") == Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n") ==
          Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n") ==
          Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n") ==
          Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 bogus\n") ==
          Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 2.0\n") ==
          Errc::ParseError);
    CHECK(mtx_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0 7\n") ==
          Errc::ParseError);

    try {
      parse_mtx("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 oops\n");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("symmetric expansion collides with an explicit mirror entry") {
    // (2,1) and (1,2) both present: expansion produces a duplicate, which the
    // canonicalizer rejects rather than silently summing.
    const std::string text =
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "2 1 3.0\n"
        "1 2 3.0\n";
    CHECK(mtx_error(text) == Errc::DuplicateEntry);
  }

  TEST_CASE("vector round-trip is bit-exact") {
    const DenseVector v = {0.0,    -0.0,     1.0 / 3.0, 1e308, 5e-324,
                           -2.5e-10, 65504.0, -1.0,      42.0,  HUGE_VAL};
    std::ostringstream out;
    write_vector(v, out);
    std::istringstream in(out.str());
    const DenseVector back = read_vector(in);
    REQUIRE(back.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(bits_same(back[i], v[i]));
  }

  TEST_CASE("vector reader skips blanks and flags junk with a line number") {
    std::istringstream in("1.5\n\n   2.5  \n-3e2\n");
    const DenseVector v = read_vector(in);
    CHECK(v == DenseVector{1.5, 2.5, -300.0});

    std::istringstream bad("1.0\nquack\n");
    try {
      read_vector(bad);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("vector file round-trip through the filesystem") {
    const ScratchDir dir;
    const auto path = dir.file("vec.txt");
    const DenseVector v = random_vector(257, 99);
    write_vector(v, path);
    const DenseVector back = read_vector(path);
    REQUIRE(back.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(bits_same(back[i], v[i]));
  }

  TEST_CASE("missing files raise IoFailure") {
    const ScratchDir dir;
    CHECK_THROWS_AS((void)read_ddm(dir.file("absent.ddm")), Error);
    CHECK_THROWS_AS((void)read_vector(dir.file("absent.txt")), Error);
    try {
      (void)read_ddm(dir.file("absent.ddm"));
    } catch (const Error& e) {
      CHECK(e.code() == Errc::IoFailure);
    }
  }
}
