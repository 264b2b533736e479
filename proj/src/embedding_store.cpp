#include "chronolex/embedding_store.hpp"

#include <cmath>
#include <fstream>

#include "chronolex/error.hpp"
#include "text.hpp"

namespace chronolex {

StaticEmbeddingTable::StaticEmbeddingTable(
    std::size_t dim, std::vector<std::string> words,
    std::vector<std::vector<float>> vectors, std::vector<float> unknown_vector)
    : dim_(dim), words_(std::move(words)), unknown_(std::move(unknown_vector)) {
  if (dim_ == 0) throw Error(Errc::DimensionMismatch, "embedding dim must be positive");
  if (words_.size() != vectors.size())
    throw Error(Errc::InvalidArgument, "word and vector counts differ");
  if (unknown_.size() != dim_)
    throw Error(Errc::DimensionMismatch, "unknown vector has length " +
                                             std::to_string(unknown_.size()) +
                                             ", expected " + std::to_string(dim_));
  data_.reserve(words_.size() * dim_);
  rows_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw Error(Errc::MalformedLine, "empty word key");
    if (vectors[i].size() != dim_)
      throw Error(Errc::DimensionMismatch,
                  "vector for '" + words_[i] + "' has length " +
                      std::to_string(vectors[i].size()) + ", expected " +
                      std::to_string(dim_));
    if (!rows_.emplace(words_[i], i).second)
      throw Error(Errc::MalformedLine, "duplicate word '" + words_[i] + "'");
    data_.insert(data_.end(), vectors[i].begin(), vectors[i].end());
  }
}

bool StaticEmbeddingTable::contains(std::string_view word) const {
  return rows_.find(word) != rows_.end();
}

std::span<const float> StaticEmbeddingTable::lookup(std::string_view word) const {
  auto it = rows_.find(word);
  if (it == rows_.end()) return unknown_;
  return std::span<const float>(data_).subspan(it->second * dim_, dim_);
}

bool operator==(const StaticEmbeddingTable& a, const StaticEmbeddingTable& b) {
  return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_ &&
         a.unknown_ == b.unknown_;
}

namespace {

std::string at_line(std::size_t line_no) {
  return " at line " + std::to_string(line_no);
}

}  // namespace

StaticEmbeddingTable load_static_embeddings(
    std::istream& in, const std::optional<std::string>& unknown_token) {
  std::vector<std::string> words;
  std::vector<std::vector<float>> vectors;
  std::optional<std::size_t> header_count;
  std::optional<std::size_t> header_dim;
  std::size_t dim = 0;
  bool seen_content = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_whitespace(line);
    if (fields.empty() || fields.front().front() == '#') continue;

    if (!seen_content) {
      seen_content = true;
      std::size_t count = 0, hdim = 0;
      if (fields.size() == 2 && detail::is_all_digits(fields[0]) &&
          detail::is_all_digits(fields[1]) && detail::parse_number(fields[0], count) &&
          detail::parse_number(fields[1], hdim)) {
        header_count = count;
        header_dim = hdim;
        continue;
      }
    }

    if (fields.size() < 2)
      throw Error(Errc::MalformedLine, "word without vector components" + at_line(line_no));
    std::vector<float> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      std::string_view text = fields[i];
      if (text.size() > 1 && text.front() == '+' && text[1] != '-') text.remove_prefix(1);
      if (!detail::parse_number(text, v) || !std::isfinite(v))
        throw Error(Errc::MalformedLine, "non-numeric component '" +
                                             std::string(fields[i]) + "'" + at_line(line_no));
      vec.push_back(static_cast<float>(v));
    }
    if (words.empty()) {
      dim = vec.size();
      if (header_dim && *header_dim != dim)
        throw Error(Errc::DimensionMismatch, "header declares dim " +
                                                 std::to_string(*header_dim) + " but found " +
                                                 std::to_string(dim) + at_line(line_no));
    } else if (vec.size() != dim) {
      throw Error(Errc::DimensionMismatch, "vector length " + std::to_string(vec.size()) +
                                               " != " + std::to_string(dim) + at_line(line_no));
    }
    words.emplace_back(fields[0]);
    vectors.push_back(std::move(vec));
  }
  if (in.bad()) throw Error(Errc::Io, "read error while loading embeddings");
  if (words.empty()) throw Error(Errc::EmptyTable, "embedding source has no data lines");
  if (header_count && *header_count != words.size())
    throw Error(Errc::MalformedLine, "header declares " + std::to_string(*header_count) +
                                         " entries but found " + std::to_string(words.size()));

  std::vector<float> unknown(dim, 0.0f);
  if (unknown_token) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i] == *unknown_token) {
        unknown = vectors[i];
        break;
      }
    }
  }
  return StaticEmbeddingTable(dim, std::move(words), std::move(vectors), std::move(unknown));
}

StaticEmbeddingTable load_static_embeddings_file(
    const std::string& path, const std::optional<std::string>& unknown_token) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open embeddings file '" + path + "'");
  return load_static_embeddings(in, unknown_token);
}

}  // namespace chronolex
