#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chronolex {

enum class Errc {
  // embedding_store
  DimensionMismatch,
  MalformedLine,
  EmptyTable,
  // corpus
  YearOutOfRange,
  WrongArity,
  MalformedYear,
  MalformedCount,
  Io,
  // temporal
  MixedArity,
  SliceOutOfRange,
  FormatVersionMismatch,
  ChecksumMismatch,
  CorruptIndex,
  // mds
  Empty,
  NumericalFailure,
  KeyMismatch,
  // service
  EmptyQuery,
  DuplicateWord,
  InvalidQuery,
  AllPointsMissing,
  BindFailure,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI exit codes, HTTP statuses) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace chronolex
