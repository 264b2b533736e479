#include "chronolex/corpus.hpp"

#include <zlib.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "chronolex/error.hpp"
#include "text.hpp"

namespace chronolex {

void TimeSliceConfig::validate() const {
  if (width_years < 1)
    throw Error(Errc::InvalidArgument, "slice width must be at least 1 year");
  if (start_year > end_year)
    throw Error(Errc::InvalidArgument, "slice start year " + std::to_string(start_year) +
                                           " is after end year " + std::to_string(end_year));
}

int TimeSliceConfig::slice_count() const {
  int span = end_year - start_year + 1;
  return (span + width_years - 1) / width_years;
}

int TimeSliceConfig::slice_first_year(int slice) const {
  return start_year + slice * width_years;
}

int TimeSliceConfig::slice_last_year(int slice) const {
  int last = start_year + (slice + 1) * width_years - 1;
  return last < end_year ? last : end_year;
}

std::string TimeSliceConfig::slice_label(int slice) const {
  int first = slice_first_year(slice);
  int last = slice_last_year(slice);
  if (first == last) return std::to_string(first);
  return std::to_string(first) + "-" + std::to_string(last);
}

int time_slice(const TimeSliceConfig& config, int year) {
  if (year < config.start_year || year > config.end_year)
    throw Error(Errc::YearOutOfRange, "year " + std::to_string(year) + " outside [" +
                                          std::to_string(config.start_year) + ", " +
                                          std::to_string(config.end_year) + "]");
  return (year - config.start_year) / config.width_years;
}

NgramRecord parse_ngram_line(std::string_view line, int n) {
  auto fields = detail::split_exact(line, '\t');
  if (fields.size() < 3)
    throw Error(Errc::WrongArity, "expected at least 3 tab-separated fields, got " +
                                      std::to_string(fields.size()));

  NgramRecord rec;
  auto words = detail::split_exact(fields[0], ' ');
  if (static_cast<int>(words.size()) != n)
    throw Error(Errc::WrongArity, "expected " + std::to_string(n) + " words, got " +
                                      std::to_string(words.size()));
  rec.words.reserve(words.size());
  for (auto w : words) {
    if (w.empty()) throw Error(Errc::WrongArity, "empty word in n-gram");
    rec.words.emplace_back(w);
  }

  if (fields[1].size() != 4 || !detail::is_all_digits(fields[1]) ||
      !detail::parse_number(fields[1], rec.year))
    throw Error(Errc::MalformedYear, "malformed year '" + std::string(fields[1]) + "'");

  if (!detail::is_all_digits(fields[2]) || !detail::parse_number(fields[2], rec.count) ||
      rec.count == 0)
    throw Error(Errc::MalformedCount, "malformed count '" + std::string(fields[2]) + "'");
  return rec;
}

std::string format_ngram_line(const NgramRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.words.size(); ++i) {
    if (i) out += ' ';
    out += record.words[i];
  }
  out += '\t';
  out += std::to_string(record.year);
  out += '\t';
  out += std::to_string(record.count);
  return out;
}

namespace {

class IstreamLineSource final : public LineSource {
 public:
  IstreamLineSource(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  bool next_line(std::string& line) override {
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw Error(Errc::Io, "read error in " + name_);
      return false;
    }
    return true;
  }
  const std::string& name() const override { return name_; }

 private:
  std::istream& in_;
  std::string name_;
};

class OwnedFileLineSource final : public LineSource {
 public:
  explicit OwnedFileLineSource(const std::string& path) : in_(path), name_(path) {
    if (!in_) throw Error(Errc::Io, "cannot open corpus file '" + path + "'");
  }
  bool next_line(std::string& line) override {
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw Error(Errc::Io, "read error in " + name_);
      return false;
    }
    return true;
  }
  const std::string& name() const override { return name_; }

 private:
  std::ifstream in_;
  std::string name_;
};

class GzipLineSource final : public LineSource {
 public:
  explicit GzipLineSource(const std::string& path) : name_(path) {
    file_ = gzopen(path.c_str(), "rb");
    if (!file_) throw Error(Errc::Io, "cannot open gzip corpus file '" + path + "'");
    gzbuffer(file_, 1 << 17);
  }
  ~GzipLineSource() override {
    if (file_) gzclose(file_);
  }
  GzipLineSource(const GzipLineSource&) = delete;
  GzipLineSource& operator=(const GzipLineSource&) = delete;

  bool next_line(std::string& line) override {
    line.clear();
    for (;;) {
      if (pos_ == len_) {
        if (eof_) return !line.empty();
        int got = gzread(file_, buf_.data(), static_cast<unsigned>(buf_.size()));
        if (got < 0) {
          int errnum = 0;
          const char* msg = gzerror(file_, &errnum);
          throw Error(Errc::Io, "gzip read error in " + name_ + ": " + msg);
        }
        pos_ = 0;
        len_ = static_cast<std::size_t>(got);
        if (got == 0) {
          eof_ = true;
          return !line.empty();
        }
      }
      const char* begin = buf_.data() + pos_;
      const char* end = buf_.data() + len_;
      const char* nl = static_cast<const char*>(std::memchr(begin, '\n', end - begin));
      if (nl) {
        line.append(begin, nl);
        pos_ += static_cast<std::size_t>(nl - begin) + 1;
        return true;
      }
      line.append(begin, end);
      pos_ = len_;
    }
  }
  const std::string& name() const override { return name_; }

 private:
  gzFile file_ = nullptr;
  std::string name_;
  std::array<char, 1 << 16> buf_{};
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  bool eof_ = false;
};

bool has_gzip_magic(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error(Errc::Io, "cannot open corpus file '" + path + "'");
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  return probe.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

}  // namespace

std::unique_ptr<LineSource> open_line_source(const std::string& path) {
  if (has_gzip_magic(path)) return std::make_unique<GzipLineSource>(path);
  return std::make_unique<OwnedFileLineSource>(path);
}

std::unique_ptr<LineSource> stream_line_source(std::istream& in, std::string name) {
  return std::make_unique<IstreamLineSource>(in, std::move(name));
}

CorpusStream::CorpusStream(std::vector<std::unique_ptr<LineSource>> sources, int n,
                           TimeSliceConfig config, ErrorPolicy policy)
    : sources_(std::move(sources)), n_(n), config_(config), policy_(policy) {
  if (n_ < 1 || n_ % 2 == 0)
    throw Error(Errc::InvalidArgument, "n-gram order must be a positive odd number");
  config_.validate();
}

std::optional<SlicedRecord> CorpusStream::next() {
  while (current_ < sources_.size()) {
    LineSource& src = *sources_[current_];
    if (!src.next_line(line_)) {
      ++current_;
      line_in_source_ = 0;
      continue;
    }
    ++line_in_source_;
    ++summary_.lines;
    if (line_.empty()) {
      ++summary_.blank;
      continue;
    }
    try {
      SlicedRecord out;
      out.record = parse_ngram_line(line_, n_);
      out.slice = time_slice(config_, out.record.year);
      ++summary_.records;
      return out;
    } catch (const Error& e) {
      if (e.code() == Errc::YearOutOfRange)
        ++summary_.out_of_range;
      else
        ++summary_.malformed;
      if (policy_ == ErrorPolicy::abort)
        throw Error(e.code(), src.name() + ":" + std::to_string(line_in_source_) + ": " +
                                  e.what());
    }
  }
  return std::nullopt;
}

}  // namespace chronolex
