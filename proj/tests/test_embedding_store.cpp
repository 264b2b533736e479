#include <doctest.h>

#include <random>
#include <sstream>

#include "chronolex/embedding_store.hpp"
#include "chronolex/error.hpp"

using namespace chronolex;

namespace {

StaticEmbeddingTable load(const std::string& text, std::optional<std::string> unk = {}) {
  std::istringstream in(text);
  return load_static_embeddings(in, unk);
}

Errc load_error(const std::string& text) {
  try {
    load(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

std::vector<float> vec(std::span<const float> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("two plain lines") {
  auto t = load("cat 1.0 2.0\ndog 3.0 4.0");
  CHECK(t.dim() == 2);
  CHECK(t.size() == 2);
  CHECK(vec(t.lookup("cat")) == std::vector<float>{1, 2});
  CHECK(vec(t.lookup("dog")) == std::vector<float>{3, 4});
  CHECK(vec(t.unknown_vector()) == std::vector<float>{0, 0});
}

TEST_CASE("short vector reports the line") {
  try {
    load("cat 1.0 2.0\ndog 3.0");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown token present in the file") {
  auto t = load("*UNK* 0.5 0.5\ncat 1.0 2.0", "*UNK*");
  CHECK(vec(t.unknown_vector()) == std::vector<float>{0.5f, 0.5f});
  CHECK(t.contains("*UNK*"));
  CHECK(vec(t.lookup("zyzzyva")) == std::vector<float>{0.5f, 0.5f});
}

TEST_CASE("unknown token requested but absent falls back to zeros") {
  auto t = load("cat 1 2", "<unk>");
  CHECK(vec(t.lookup("zyzzyva")) == std::vector<float>{0, 0});
}

TEST_CASE("lookup") {
  auto t = load("cat 1 2");
  CHECK(vec(t.lookup("cat")) == std::vector<float>{1, 2});
  CHECK(vec(t.lookup("zyzzyva")) == std::vector<float>{0, 0});
  SUBCASE("case sensitive") { CHECK(vec(t.lookup("Cat")) == std::vector<float>{0, 0}); }
}

TEST_CASE("header, comments, tabs and blank lines") {
  auto t = load("# produced by some toolkit\n2 3\n\nthe\t0.1 0.2\t0.3\n# mid comment\nof 1e-3 -2 +0\n");
  CHECK(t.dim() == 3);
  CHECK(t.size() == 2);
  CHECK(t.lookup("of")[0] == doctest::Approx(1e-3));
}

TEST_CASE("header mismatches") {
  CHECK(load_error("3 2\ncat 1 2\ndog 3 4\n") == Errc::MalformedLine);
  CHECK(load_error("2 3\ncat 1 2\ndog 3 4\n") == Errc::DimensionMismatch);
}

TEST_CASE("malformed and empty inputs") {
  CHECK(load_error("cat 1.0 abc\n") == Errc::MalformedLine);
  CHECK(load_error("cat 1.0 nan\n") == Errc::MalformedLine);
  CHECK(load_error("cat\n") == Errc::MalformedLine);
  CHECK(load_error("cat 1\ncat 2\n") == Errc::MalformedLine);
  CHECK(load_error("") == Errc::EmptyTable);
  CHECK(load_error("# only a comment\n\n") == Errc::EmptyTable);
  CHECK(load_error("10 4\n") == Errc::EmptyTable);
}

TEST_CASE("missing file is an Io error") {
  CHECK_THROWS_AS(load_static_embeddings_file("/nonexistent/file.vec"), Error);
}

TEST_CASE("property: lookup length is dim and loads are reproducible") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 12);
    const int words = 1 + static_cast<int>(rng() % 30);
    std::ostringstream text;
    for (int w = 0; w < words; ++w) {
      text << "word" << w;
      for (int j = 0; j < dim; ++j) text << ' ' << u(rng);
      text << '\n';
    }
    const auto a = load(text.str());
    const auto b = load(text.str());
    CHECK(a == b);
    for (const char* probe : {"word0", "missing", "", "word999"}) {
      auto x = a.lookup(probe);
      auto y = a.lookup(probe);
      CHECK(x.size() == static_cast<std::size_t>(dim));
      CHECK(std::equal(x.begin(), x.end(), y.begin()));
    }
  }
}
