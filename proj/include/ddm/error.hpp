#pragma once

#include <stdexcept>
#include <string>

namespace ddm {

enum class Errc {
  DuplicateEntry,
  IndexOverflow,
  ValueOverflow,
  NanInput,
  DimensionMismatch,
  InvalidConfig,
  ZeroTraffic,
  ZeroDuration,
  BadMagic,
  TruncatedFile,
  ValidationFailure,
  UnsupportedVersion,
  ParseError,
  UnsupportedFeature,
  InconsistentProfile,
  IoFailure,
};

const char* errc_name(Errc code);

/// All library failures throw this; code() tells callers which contract broke.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ddm
