#include "chronolex/error.hpp"

namespace chronolex {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::YearOutOfRange: return "YearOutOfRange";
    case Errc::WrongArity: return "WrongArity";
    case Errc::MalformedYear: return "MalformedYear";
    case Errc::MalformedCount: return "MalformedCount";
    case Errc::Io: return "Io";
    case Errc::MixedArity: return "MixedArity";
    case Errc::SliceOutOfRange: return "SliceOutOfRange";
    case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::CorruptIndex: return "CorruptIndex";
    case Errc::Empty: return "Empty";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::DuplicateWord: return "DuplicateWord";
    case Errc::InvalidQuery: return "InvalidQuery";
    case Errc::AllPointsMissing: return "AllPointsMissing";
    case Errc::BindFailure: return "BindFailure";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chronolex
