#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chronolex {

/// One corpus datum: n words, the year it was observed in and its count.
struct NgramRecord {
  std::vector<std::string> words;
  int year = 0;
  std::uint64_t count = 0;

  friend bool operator==(const NgramRecord&, const NgramRecord&) = default;
};

/// Partition of [start_year, end_year] into buckets of width_years. The last
/// bucket is truncated at end_year.
struct TimeSliceConfig {
  int start_year = 1800;
  int end_year = 2008;
  int width_years = 5;

  /// Throws Errc::InvalidArgument when the range is empty or width < 1.
  void validate() const;
  int slice_count() const;
  int slice_first_year(int slice) const;
  int slice_last_year(int slice) const;
  /// "1800-1804" style label with inclusive endpoints.
  std::string slice_label(int slice) const;

  friend bool operator==(const TimeSliceConfig&, const TimeSliceConfig&) = default;
};

/// 0-based slice index of `year`; Errc::YearOutOfRange outside the range.
int time_slice(const TimeSliceConfig& config, int year);

/// Parses `w1 ... wn<TAB>year<TAB>count[<TAB>extra...]`.
NgramRecord parse_ngram_line(std::string_view line, int n);

/// Canonical TSV form of a record (no trailing newline).
std::string format_ngram_line(const NgramRecord& record);

class LineSource {
 public:
  virtual ~LineSource() = default;
  /// Reads the next line without its '\n'. Returns false at end of input.
  virtual bool next_line(std::string& line) = 0;
  virtual const std::string& name() const = 0;
};

/// Opens a corpus file; gzip input is detected from its magic bytes.
std::unique_ptr<LineSource> open_line_source(const std::string& path);

/// Wraps an existing stream; the stream must outlive the source.
std::unique_ptr<LineSource> stream_line_source(std::istream& in,
                                               std::string name = "<stream>");

enum class ErrorPolicy { skip, abort };

struct IngestSummary {
  std::uint64_t lines = 0;
  std::uint64_t records = 0;
  std::uint64_t blank = 0;
  std::uint64_t malformed = 0;
  std::uint64_t out_of_range = 0;

  std::uint64_t skipped() const { return malformed + out_of_range; }
};

struct SlicedRecord {
  int slice = 0;
  NgramRecord record;
};

/// Pulls records from each source in turn, pairing every record with its
/// time slice. Under ErrorPolicy::skip bad or out-of-range lines are counted
/// in summary(); under ErrorPolicy::abort the first such line throws.
class CorpusStream {
 public:
  CorpusStream(std::vector<std::unique_ptr<LineSource>> sources, int n,
               TimeSliceConfig config, ErrorPolicy policy = ErrorPolicy::skip);

  std::optional<SlicedRecord> next();

  const IngestSummary& summary() const noexcept { return summary_; }

 private:
  std::vector<std::unique_ptr<LineSource>> sources_;
  std::size_t current_ = 0;
  std::uint64_t line_in_source_ = 0;
  int n_;
  TimeSliceConfig config_;
  ErrorPolicy policy_;
  IngestSummary summary_;
  std::string line_;
};

}  // namespace chronolex
