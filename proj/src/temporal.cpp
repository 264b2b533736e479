#include "chronolex/temporal.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "chronolex/error.hpp"

namespace chronolex {

std::string_view to_string(ContextOperator op) {
  return op == ContextOperator::sum ? "sum" : "concat";
}

ContextOperator parse_context_operator(std::string_view name) {
  if (name == "sum") return ContextOperator::sum;
  if (name == "concat") return ContextOperator::concat;
  throw Error(Errc::InvalidArgument, "unknown context operator '" + std::string(name) + "'");
}

std::size_t context_dim(ContextOperator op, int n, std::size_t dim) {
  return op == ContextOperator::sum ? dim : static_cast<std::size_t>(n - 1) * dim;
}

std::vector<double> combine_context(const NgramRecord& record,
                                    const StaticEmbeddingTable& table, ContextOperator op) {
  const int n = static_cast<int>(record.words.size());
  const int middle = n / 2;
  const std::size_t d = table.dim();
  std::vector<double> out(context_dim(op, n, d), 0.0);
  std::size_t offset = 0;
  for (int i = 0; i < n; ++i) {
    if (i == middle) continue;
    auto v = table.lookup(record.words[i]);
    if (op == ContextOperator::sum) {
      for (std::size_t j = 0; j < d; ++j) out[j] += v[j];
    } else {
      std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
      offset += d;
    }
  }
  return out;
}

// TemporalIndex

TemporalIndex::TemporalIndex(TimeSliceConfig config, ContextOperator op, int n,
                             std::size_t dim, EntryMap entries)
    : config_(config),
      op_(op),
      n_(n),
      dim_(dim),
      dim_out_(context_dim(op, n, dim)),
      entries_(std::move(entries)) {
  config_.validate();
  const int slices = config_.slice_count();
  std::vector<std::string_view> words;
  words.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) {
    if (key.slice < 0 || key.slice >= slices)
      throw Error(Errc::SliceOutOfRange, "entry slice " + std::to_string(key.slice) +
                                             " outside [0, " + std::to_string(slices) + ")");
    if (entry.normalizer == 0)
      throw Error(Errc::CorruptIndex, "zero normalizer for '" + key.word + "'");
    if (entry.vector.size() != dim_out_)
      throw Error(Errc::DimensionMismatch, "entry for '" + key.word + "' has length " +
                                               std::to_string(entry.vector.size()));
    words.push_back(key.word);
  }
  std::sort(words.begin(), words.end());
  vocabulary_size_ = static_cast<std::size_t>(
      std::distance(words.begin(), std::unique(words.begin(), words.end())));
}

const TemporalEntry* TemporalIndex::find(int slice, std::string_view word) const {
  if (slice < 0 || slice >= config_.slice_count())
    throw Error(Errc::SliceOutOfRange, "slice " + std::to_string(slice) + " outside [0, " +
                                           std::to_string(config_.slice_count()) + ")");
  auto it = entries_.find(SliceWordView{slice, word});
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::span<const float>> TemporalIndex::vector(int slice,
                                                            std::string_view word) const {
  const TemporalEntry* e = find(slice, word);
  if (!e) return std::nullopt;
  return std::span<const float>(e->vector);
}

std::optional<std::uint64_t> TemporalIndex::normalizer(int slice, std::string_view word) const {
  const TemporalEntry* e = find(slice, word);
  if (!e) return std::nullopt;
  return e->normalizer;
}

// Builder

TemporalIndexBuilder::TemporalIndexBuilder(const StaticEmbeddingTable& table,
                                           ContextOperator op, TimeSliceConfig config, int n)
    : table_(table), op_(op), config_(config), n_(n), dim_out_(context_dim(op, n, table.dim())) {
  if (n_ < 3 || n_ % 2 == 0)
    throw Error(Errc::InvalidArgument, "n-gram order must be odd and at least 3");
  config_.validate();
}

void TemporalIndexBuilder::add(int slice, const NgramRecord& record) {
  if (static_cast<int>(record.words.size()) != n_)
    throw Error(Errc::MixedArity, "record of order " + std::to_string(record.words.size()) +
                                      " in a corpus of order " + std::to_string(n_));
  if (slice < 0 || slice >= config_.slice_count())
    throw Error(Errc::SliceOutOfRange, "slice " + std::to_string(slice) + " out of range");

  const std::string& middle = record.words[static_cast<std::size_t>(n_ / 2)];
  auto it = acc_.find(SliceWordView{slice, middle});
  if (it == acc_.end()) {
    it = acc_.emplace(SliceWordKey{slice, middle}, Accumulator{0, std::vector<double>(dim_out_)})
             .first;
  }
  Accumulator& a = it->second;
  const auto ctx = combine_context(record, table_, op_);
  const double c = static_cast<double>(record.count);
  for (std::size_t j = 0; j < dim_out_; ++j) a.weighted_sum[j] += c * ctx[j];
  a.count += record.count;
  ++records_;
}

TemporalIndex TemporalIndexBuilder::finish() && {
  TemporalIndex::EntryMap entries;
  for (auto& [key, a] : acc_) {
    TemporalEntry e;
    e.normalizer = a.count;
    e.vector.resize(dim_out_);
    const double total = static_cast<double>(a.count);
    for (std::size_t j = 0; j < dim_out_; ++j)
      e.vector[j] = static_cast<float>(a.weighted_sum[j] / total);
    entries.emplace_hint(entries.end(), key, std::move(e));
  }
  acc_.clear();
  return TemporalIndex(config_, op_, n_, table_.dim(), std::move(entries));
}

TemporalIndex build_temporal_index(CorpusStream& stream, const StaticEmbeddingTable& table,
                                   ContextOperator op, const TimeSliceConfig& config, int n) {
  TemporalIndexBuilder builder(table, op, config, n);
  while (auto rec = stream.next()) builder.add(rec->slice, rec->record);
  return std::move(builder).finish();
}

TemporalIndex build_temporal_index(std::span<const SlicedRecord> records,
                                   const StaticEmbeddingTable& table, ContextOperator op,
                                   const TimeSliceConfig& config, int n) {
  TemporalIndexBuilder builder(table, op, config, n);
  for (const auto& r : records) builder.add(r.slice, r.record);
  return std::move(builder).finish();
}

// Persistence

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kEntriesName = "entries.bin";
constexpr const char* kChecksumAlgorithm = "crc32";

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint32_t crc_of(const char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for large files.
  while (size > 0) {
    uInt chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class Reader {
 public:
  Reader(const char* data, std::size_t size) : p_(data), end_(data + size) {}

  bool done() const { return p_ == end_; }

  std::uint64_t uint(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += bytes;
    return v;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      need(1);
      auto b = static_cast<unsigned char>(*p_++);
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error(Errc::CorruptIndex, "varint too long");
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(p_, n);
    p_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end_ - p_) < n)
      throw Error(Errc::CorruptIndex, "unexpected end of entries");
  }
  const char* p_;
  const char* end_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::Io, "read error in '" + path.string() + "'");
  return data;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw Error(Errc::Io, "write error in '" + path.string() + "'");
}

}  // namespace

void save_index(const TemporalIndex& index, const std::filesystem::path& dir) {
  if (index.slice_count() > 0xffff)
    throw Error(Errc::InvalidArgument, "too many slices for the index format");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create '" + dir.string() + "': " + ec.message());

  std::string bin;
  for (const auto& [key, entry] : index.entries()) {
    put_varint(bin, key.word.size());
    bin += key.word;
    put_u16(bin, static_cast<std::uint16_t>(key.slice));
    put_u64(bin, entry.normalizer);
    for (float f : entry.vector) put_u32(bin, std::bit_cast<std::uint32_t>(f));
  }
  put_u32(bin, crc_of(bin.data(), bin.size()));

  nlohmann::ordered_json manifest = {
      {"format_version", kIndexFormatVersion},
      {"n", index.n()},
      {"operator", to_string(index.op())},
      {"dim", index.dim()},
      {"dim_out", index.dim_out()},
      {"slice_config",
       {{"start_year", index.config().start_year},
        {"end_year", index.config().end_year},
        {"width_years", index.config().width_years}}},
      {"entry_count", index.entry_count()},
      {"checksum_algorithm", kChecksumAlgorithm},
  };
  write_file(dir / kEntriesName, bin);
  write_file(dir / kManifestName, manifest.dump(2) + "\n");
}

TemporalIndex load_index(const std::filesystem::path& dir) {
  const std::string manifest_text = read_file(dir / kManifestName);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(manifest_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptIndex, std::string("unreadable manifest: ") + e.what());
  }

  int version = 0;
  TimeSliceConfig config;
  ContextOperator op{};
  int n = 0;
  std::size_t dim = 0, dim_out = 0, entry_count = 0;
  try {
    version = manifest.at("format_version").get<int>();
    if (version != kIndexFormatVersion)
      throw Error(Errc::FormatVersionMismatch,
                  "index format version " + std::to_string(version) + ", expected " +
                      std::to_string(kIndexFormatVersion));
    if (manifest.at("checksum_algorithm").get<std::string>() != kChecksumAlgorithm)
      throw Error(Errc::FormatVersionMismatch, "unsupported checksum algorithm");
    n = manifest.at("n").get<int>();
    op = parse_context_operator(manifest.at("operator").get<std::string>());
    dim = manifest.at("dim").get<std::size_t>();
    dim_out = manifest.at("dim_out").get<std::size_t>();
    const auto& sc = manifest.at("slice_config");
    config.start_year = sc.at("start_year").get<int>();
    config.end_year = sc.at("end_year").get<int>();
    config.width_years = sc.at("width_years").get<int>();
    entry_count = manifest.at("entry_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptIndex, std::string("invalid manifest: ") + e.what());
  }
  if (n < 3 || n % 2 == 0 || dim == 0 || dim_out != context_dim(op, n, dim))
    throw Error(Errc::CorruptIndex, "inconsistent manifest dimensions");

  const std::string bin = read_file(dir / kEntriesName);
  if (bin.size() < 4) throw Error(Errc::ChecksumMismatch, "entries file truncated");
  const std::size_t body = bin.size() - 4;
  Reader trailer(bin.data() + body, 4);
  if (static_cast<std::uint32_t>(trailer.uint(4)) != crc_of(bin.data(), body))
    throw Error(Errc::ChecksumMismatch, "entries checksum mismatch");

  TemporalIndex::EntryMap entries;
  Reader r(bin.data(), body);
  while (!r.done()) {
    SliceWordKey key;
    key.word = r.bytes(r.varint());
    key.slice = static_cast<int>(r.uint(2));
    TemporalEntry e;
    e.normalizer = r.uint(8);
    e.vector.resize(dim_out);
    for (auto& f : e.vector) f = std::bit_cast<float>(static_cast<std::uint32_t>(r.uint(4)));
    if (key.word.empty()) throw Error(Errc::CorruptIndex, "empty word in entries");
    if (!entries.empty() && !(std::prev(entries.end())->first < key))
      throw Error(Errc::CorruptIndex, "entries not strictly sorted");
    entries.emplace_hint(entries.end(), std::move(key), std::move(e));
  }
  if (entries.size() != entry_count)
    throw Error(Errc::CorruptIndex, "manifest declares " + std::to_string(entry_count) +
                                        " entries, file has " + std::to_string(entries.size()));
  return TemporalIndex(config, op, n, dim, std::move(entries));
}

}  // namespace chronolex
