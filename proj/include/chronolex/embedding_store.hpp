#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chronolex {

/// Static word embedding table: word -> vector of length dim(), with a
/// designated vector for the unknown token. Immutable once constructed.
class StaticEmbeddingTable {
 public:
  StaticEmbeddingTable() = default;

  /// Builds a table from parallel word/vector lists. Throws
  /// Errc::DimensionMismatch if any vector (or unknown_vector) is not of
  /// length dim, Errc::MalformedLine on empty or duplicate words.
  StaticEmbeddingTable(std::size_t dim, std::vector<std::string> words,
                       std::vector<std::vector<float>> vectors,
                       std::vector<float> unknown_vector);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }

  bool contains(std::string_view word) const;

  /// Vector for `word`, or the unknown vector when the word is not in the
  /// table. Never fails.
  std::span<const float> lookup(std::string_view word) const;

  std::span<const float> unknown_vector() const noexcept { return unknown_; }
  const std::vector<std::string>& words() const noexcept { return words_; }

  friend bool operator==(const StaticEmbeddingTable& a,
                         const StaticEmbeddingTable& b);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> data_;  // row-major, words_.size() x dim_
  std::vector<float> unknown_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>
      rows_;
};

/// Parses the `word v1 ... vd` text format. Blank lines and lines starting
/// with '#' are skipped; an optional leading `COUNT DIM` header is consumed
/// and checked against the data.
StaticEmbeddingTable load_static_embeddings(
    std::istream& in, const std::optional<std::string>& unknown_token = {});

StaticEmbeddingTable load_static_embeddings_file(
    const std::string& path,
    const std::optional<std::string>& unknown_token = {});

}  // namespace chronolex
