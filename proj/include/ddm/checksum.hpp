#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace ddm {

// FNV-1a, 64-bit. Used to fingerprint output vectors so bitwise
// reproducibility can be audited from reports alone.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                             std::uint64_t h = kFnvOffsetBasis) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

/// Hash of the raw bit patterns of a double array. Each element is fed
/// least-significant byte first, so the result is host-endianness independent.
inline std::uint64_t checksum_bits(std::span<const double> values) {
  std::uint64_t h = kFnvOffsetBasis;
  for (double v : values) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint8_t>(u >> (8 * i));
      h *= kFnvPrime;
    }
  }
  return h;
}

}  // namespace ddm
