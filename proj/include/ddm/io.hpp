#pragma once

#include <filesystem>
#include <iosfwd>

#include "ddm/sparse.hpp"

namespace ddm {

// DDM container, version 1. Fixed little-endian layout:
//   bytes 0..3   magic "DDM1"
//   byte  4      version (1)
//   byte  5      value precision: 0 = half, 1 = single, 2 = double
//   byte  6      column-index width in bytes: 2 or 4
//   byte  7      reserved, written 0, must read back 0
//   bytes 8..31  rows, cols, nnz as u64
//   then         row_ptr (rows+1) x u64, col_indices nnz x width,
//                values nnz x precision bytes (IEEE bit patterns)
// Row pointers are always 8 bytes in the file; the perf model's 4-byte
// row-pointer assumption is a modeling choice, not a storage one.

/// Throws BadMagic, UnsupportedVersion, TruncatedFile, ValidationFailure.
/// The byte stream must end exactly where the header says it does.
CsrMatrix read_ddm(std::istream& in);
CsrMatrix read_ddm(const std::filesystem::path& path);

void write_ddm(const CsrMatrix& m, std::ostream& out);
void write_ddm(const CsrMatrix& m, const std::filesystem::path& path);

/// Matrix Market coordinate reader. Accepts real and integer fields;
/// symmetric files are expanded to general (each off-diagonal entry is
/// mirrored). Pattern, complex, skew-symmetric and Hermitian inputs raise
/// UnsupportedFeature; malformed content raises ParseError with a line
/// number. Indices are converted from 1-based to 0-based and the result is
/// canonicalized through coo_to_csr.
CsrMatrix read_matrix_market(std::istream& in, ValuePrecision precision, IndexWidth index_width);
CsrMatrix read_matrix_market(const std::filesystem::path& path, ValuePrecision precision,
                             IndexWidth index_width);

/// Plain-text vectors: one decimal double per line, blank lines ignored.
/// Written with shortest round-trip formatting so read∘write is bit-exact.
DenseVector read_vector(std::istream& in);
DenseVector read_vector(const std::filesystem::path& path);

void write_vector(const DenseVector& v, std::ostream& out);
void write_vector(const DenseVector& v, const std::filesystem::path& path);

}  // namespace ddm
