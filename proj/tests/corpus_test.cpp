#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "csar/corpus.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace csar;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("csar_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static inline int counter = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("load_corpus parses the simple three-record corpus") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path,
             R"({"form": ["s"], "meaning": ["sq"]})"
             "\n"
             R"({"form": ["s", "t"], "meaning": ["sq", "x"]})"
             "\n"
             R"({"form": ["c", "t"], "meaning": ["o", "x"]})"
             "\n");
  Corpus c = load_corpus(path);
  REQUIRE(c.records.size() == 3);
  CHECK(c.skipped_count == 0);
  CHECK(c.form_vocab.size() == 3);  // s, t, c
  CHECK(c.meaning_vocab.size() == 3);
  CHECK(c.form_vocab.token(0) == "s");
  CHECK(c.form_vocab.token(1) == "t");
  CHECK(c.form_vocab.token(2) == "c");
  CHECK(c.records[1].form == std::vector<TokenId>{0, 1});
  CHECK(c.records[2].meaning.size() == 2);
}

TEST_CASE("load_corpus honors max_records as a prefix") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path,
             R"({"form": ["a"], "meaning": ["A"]})"
             "\n"
             R"({"form": ["b"], "meaning": ["B"]})"
             "\n"
             R"({"form": ["c"], "meaning": ["C"]})"
             "\n");
  Corpus c = load_corpus(path, 2);
  REQUIRE(c.records.size() == 2);
  CHECK(c.form_vocab.token(c.records[1].form[0]) == "b");
}

TEST_CASE("load_corpus skips empty forms and meanings") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path,
             R"({"form": [], "meaning": ["A"]})"
             "\n"
             R"({"form": ["a"], "meaning": ["A"]})"
             "\n"
             R"({"form": ["b"], "meaning": []})"
             "\n");
  Corpus c = load_corpus(path);
  REQUIRE(c.records.size() == 1);
  CHECK(c.skipped_count == 2);
}

TEST_CASE("load_corpus reports parse errors with line numbers") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path,
             R"({"form": ["a"], "meaning": ["A"]})"
             "\n"
             R"(not json)"
             "\n");
  try {
    load_corpus(path);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_corpus(tmp.file("missing.jsonl")), io_error);

  write_file(path, R"({"form": "a", "meaning": ["A"]})" "\n");
  CHECK_THROWS_AS(load_corpus(path), parse_error);
  write_file(path, R"({"meaning": ["A"]})" "\n");
  CHECK_THROWS_AS(load_corpus(path), parse_error);
}

TEST_CASE("load_corpus accepts numeric tokens and duplicate meanings") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path, R"({"form": [3, 6], "meaning": ["gray", "gray", "not"]})" "\n");
  Corpus c = load_corpus(path);
  REQUIRE(c.records.size() == 1);
  CHECK(c.form_vocab.token(c.records[0].form[0]) == "3");
  CHECK(c.records[0].meaning.size() == 2);  // deduplicated
}

TEST_CASE("corpus round-trips byte-stably") {
  TempDir tmp;
  Corpus c = test::make_corpus({
      {{"3", "6"}, {"not", "gray"}},
      {{"7", "7"}, {"not", "blue"}},
  });
  const std::string p1 = tmp.file("a.jsonl");
  const std::string p2 = tmp.file("b.jsonl");
  save_corpus(c, p1);
  Corpus c2 = load_corpus(p1);
  save_corpus(c2, p2);
  CHECK(read_file(p1) == read_file(p2));
  REQUIRE(c2.records.size() == c.records.size());
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    CHECK(c.records[i].form.size() == c2.records[i].form.size());
    CHECK(c.records[i].meaning.size() == c2.records[i].meaning.size());
  }
}

TEST_CASE("inventory round-trips with all fields") {
  TempDir tmp;
  Inventory inv;
  Morpheme m;
  m.form = {inv.form_vocab.intern("t")};
  m.meaning = {inv.meaning_vocab.intern("x")};
  m.weight = 0.5;
  m.initial_weight = 0.75;
  m.order = 0;
  m.prevalence = 0.25;
  inv.morphemes.push_back(m);
  const std::string p1 = tmp.file("inv.jsonl");
  save_inventory(inv, p1);
  Inventory loaded = load_inventory(p1);
  REQUIRE(loaded.morphemes.size() == 1);
  CHECK(loaded.morphemes[0].weight == 0.5);
  CHECK(loaded.morphemes[0].initial_weight == 0.75);
  CHECK(loaded.morphemes[0].order == 0);
  CHECK(loaded.morphemes[0].prevalence == 0.25);
  CHECK(loaded.form_surface(loaded.morphemes[0]) == std::vector<std::string>{"t"});

  const std::string p2 = tmp.file("inv2.jsonl");
  save_inventory(loaded, p2);
  CHECK(read_file(p1) == read_file(p2));
}

TEST_CASE("empty inventory saves to an empty file") {
  TempDir tmp;
  Inventory inv;
  const std::string p = tmp.file("empty.jsonl");
  save_inventory(inv, p);
  CHECK(read_file(p).empty());
  CHECK(load_inventory(p).morphemes.empty());
}

TEST_CASE("inventory orders stay contiguous over save/load") {
  TempDir tmp;
  Inventory inv;
  for (int i = 0; i < 100; ++i) {
    Morpheme m;
    m.form = {inv.form_vocab.intern("f" + std::to_string(i))};
    m.meaning = {inv.meaning_vocab.intern("m" + std::to_string(i))};
    m.order = static_cast<std::uint32_t>(i);
    inv.morphemes.push_back(m);
  }
  const std::string p = tmp.file("inv.jsonl");
  save_inventory(inv, p);
  Inventory loaded = load_inventory(p);
  REQUIRE(loaded.morphemes.size() == 100);
  for (std::uint32_t i = 0; i < 100; ++i) CHECK(loaded.morphemes[i].order == i);
}

TEST_CASE("two loads of the same file assign identical token ids") {
  TempDir tmp;
  const std::string path = tmp.file("c.jsonl");
  write_file(path,
             R"({"form": ["z", "a", "z"], "meaning": ["q", "p"]})"
             "\n"
             R"({"form": ["a", "b"], "meaning": ["p"]})"
             "\n");
  Corpus a = load_corpus(path);
  Corpus b = load_corpus(path);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].form == b.records[i].form);
    CHECK(a.records[i].meaning == b.records[i].meaning);
  }
}
