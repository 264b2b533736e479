#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronolex/corpus.hpp"
#include "chronolex/embedding_store.hpp"

namespace chronolex {

/// How the context words of an n-gram are combined. Concatenation follows
/// position order left to right.
enum class ContextOperator { sum, concat };

std::string_view to_string(ContextOperator op);
ContextOperator parse_context_operator(std::string_view name);

/// Output length of `op` for n-grams of order n over d-dimensional inputs.
std::size_t context_dim(ContextOperator op, int n, std::size_t dim);

/// Combines the embeddings of every non-middle word of `record`.
/// Out-of-vocabulary words contribute the table's unknown vector.
std::vector<double> combine_context(const NgramRecord& record,
                                    const StaticEmbeddingTable& table,
                                    ContextOperator op);

struct SliceWordKey {
  int slice = 0;
  std::string word;

  friend auto operator<=>(const SliceWordKey&, const SliceWordKey&) = default;
};

/// Non-owning lookup key for heterogeneous map lookup.
struct SliceWordView {
  int slice = 0;
  std::string_view word;
};

inline bool operator<(const SliceWordKey& a, const SliceWordView& b) {
  return a.slice != b.slice ? a.slice < b.slice : std::string_view(a.word) < b.word;
}
inline bool operator<(const SliceWordView& a, const SliceWordKey& b) {
  return a.slice != b.slice ? a.slice < b.slice : a.word < std::string_view(b.word);
}

struct TemporalEntry {
  std::uint64_t normalizer = 0;  // total count N(t, w)
  std::vector<float> vector;     // g(t, w), length dim_out

  friend bool operator==(const TemporalEntry&, const TemporalEntry&) = default;
};

/// Per-(slice, word) count-weighted mean of context vectors. A pair with no
/// observations is absent, never a zero vector.
class TemporalIndex {
 public:
  using EntryMap = std::map<SliceWordKey, TemporalEntry, std::less<>>;

  TemporalIndex() = default;
  TemporalIndex(TimeSliceConfig config, ContextOperator op, int n, std::size_t dim,
                EntryMap entries);

  const TimeSliceConfig& config() const noexcept { return config_; }
  ContextOperator op() const noexcept { return op_; }
  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  int slice_count() const { return config_.slice_count(); }

  const EntryMap& entries() const noexcept { return entries_; }
  std::size_t entry_count() const noexcept { return entries_.size(); }
  /// Number of distinct words with at least one entry.
  std::size_t vocabulary_size() const noexcept { return vocabulary_size_; }

  /// g(slice, word), or nullopt when the word has no data in that slice.
  /// Throws Errc::SliceOutOfRange for slice outside [0, slice_count()).
  std::optional<std::span<const float>> vector(int slice, std::string_view word) const;
  std::optional<std::uint64_t> normalizer(int slice, std::string_view word) const;

  friend bool operator==(const TemporalIndex&, const TemporalIndex&) = default;

 private:
  const TemporalEntry* find(int slice, std::string_view word) const;

  TimeSliceConfig config_;
  ContextOperator op_ = ContextOperator::sum;
  int n_ = 5;
  std::size_t dim_ = 0;
  std::size_t dim_out_ = 0;
  EntryMap entries_;
  std::size_t vocabulary_size_ = 0;
};

/// Single-pass accumulator: keeps count-weighted context sums and total
/// counts per key in double precision and divides at finish().
class TemporalIndexBuilder {
 public:
  TemporalIndexBuilder(const StaticEmbeddingTable& table, ContextOperator op,
                       TimeSliceConfig config, int n = 5);

  /// Throws Errc::MixedArity when the record is not of order n,
  /// Errc::SliceOutOfRange for an invalid slice.
  void add(int slice, const NgramRecord& record);

  std::uint64_t records_added() const noexcept { return records_; }

  TemporalIndex finish() &&;

 private:
  struct Accumulator {
    std::uint64_t count = 0;
    std::vector<double> weighted_sum;
  };

  const StaticEmbeddingTable& table_;
  ContextOperator op_;
  TimeSliceConfig config_;
  int n_;
  std::size_t dim_out_;
  std::map<SliceWordKey, Accumulator, std::less<>> acc_;
  std::uint64_t records_ = 0;
};

/// Drains `stream` into a new index.
TemporalIndex build_temporal_index(CorpusStream& stream, const StaticEmbeddingTable& table,
                                   ContextOperator op, const TimeSliceConfig& config,
                                   int n = 5);

TemporalIndex build_temporal_index(std::span<const SlicedRecord> records,
                                   const StaticEmbeddingTable& table, ContextOperator op,
                                   const TimeSliceConfig& config, int n = 5);

inline constexpr int kIndexFormatVersion = 1;

/// Writes `manifest.json` and `entries.bin` into `dir` (created if needed).
void save_index(const TemporalIndex& index, const std::filesystem::path& dir);

/// Reads an index written by save_index. Throws Errc::Io,
/// Errc::FormatVersionMismatch, Errc::ChecksumMismatch or Errc::CorruptIndex.
TemporalIndex load_index(const std::filesystem::path& dir);

}  // namespace chronolex
