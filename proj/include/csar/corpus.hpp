#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace csar {

using TokenId = std::uint32_t;

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bidirectional surface-string <-> TokenId map. Ids are assigned in first
/// occurrence order, so reloading the same file yields identical ids.
class Vocab {
 public:
  TokenId intern(std::string_view token) {
    auto it = index_.find(std::string(token));
    if (it != index_.end()) return it->second;
    const TokenId id = static_cast<TokenId>(tokens_.size());
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), id);
    return id;
  }

  std::optional<TokenId> id_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

/// One parallel datum: an ordered form-token sequence plus a meaning-token
/// set, canonicalized to ascending TokenId order.
struct Record {
  std::vector<TokenId> form;
  std::vector<TokenId> meaning;
};

struct Corpus {
  std::vector<Record> records;
  Vocab form_vocab;
  Vocab meaning_vocab;
  std::size_t skipped_count = 0;
};

/// An induced (form, meaning) pair. `weight` is the capped weight at
/// selection, `initial_weight` the weight at first evaluation, `order` the
/// selection index and `prevalence` the fraction of records the pair was
/// ablated from.
struct Morpheme {
  std::vector<TokenId> form;
  std::vector<TokenId> meaning;
  double weight = 0.0;
  double initial_weight = 0.0;
  std::uint32_t order = 0;
  double prevalence = 0.0;
};

/// Ordered induction output. Carries its own vocabularies so it can be
/// resolved independently of any corpus.
struct Inventory {
  std::vector<Morpheme> morphemes;
  Vocab form_vocab;
  Vocab meaning_vocab;

  std::vector<std::string> form_surface(const Morpheme& m) const {
    std::vector<std::string> out;
    out.reserve(m.form.size());
    for (TokenId t : m.form) out.push_back(form_vocab.token(t));
    return out;
  }
  std::vector<std::string> meaning_surface(const Morpheme& m) const {
    std::vector<std::string> out;
    out.reserve(m.meaning.size());
    for (TokenId t : m.meaning) out.push_back(meaning_vocab.token(t));
    return out;
  }
};

namespace detail {

inline void sort_unique(std::vector<TokenId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline bool blank_line(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

/// Token arrays hold strings; bare JSON numbers are accepted and stringified.
inline std::vector<std::string> token_array(const nlohmann::json& arr,
                                            const std::string& path,
                                            std::size_t line_no,
                                            const char* key) {
  if (!arr.is_array())
    throw parse_error(path, line_no, std::string("\"") + key + "\" is not an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& el : arr) {
    if (el.is_string())
      out.push_back(el.get<std::string>());
    else if (el.is_number_integer() || el.is_number_unsigned() || el.is_number_float())
      out.push_back(el.dump());
    else
      throw parse_error(path, line_no,
                        std::string("\"") + key + "\" contains a non-string token");
  }
  return out;
}

inline nlohmann::json parse_line(const std::string& line, const std::string& path,
                                 std::size_t line_no) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw parse_error(path, line_no, "line is not a JSON object");
  return j;
}

}  // namespace detail

/// Loads a line-delimited corpus. Lines with an empty form or meaning are
/// skipped and counted; reading stops once max_records records are retained.
inline Corpus load_corpus(const std::string& path,
                          std::optional<std::size_t> max_records = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open corpus file: " + path);
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (max_records && corpus.records.size() >= *max_records) break;
    if (detail::blank_line(line)) {
      ++corpus.skipped_count;
      continue;
    }
    nlohmann::json j = detail::parse_line(line, path, line_no);
    if (!j.contains("form") || !j.contains("meaning"))
      throw parse_error(path, line_no, "missing \"form\" or \"meaning\" key");
    auto form = detail::token_array(j["form"], path, line_no, "form");
    auto meaning = detail::token_array(j["meaning"], path, line_no, "meaning");
    if (form.empty() || meaning.empty()) {
      ++corpus.skipped_count;
      continue;
    }
    Record rec;
    rec.form.reserve(form.size());
    for (const auto& t : form) rec.form.push_back(corpus.form_vocab.intern(t));
    rec.meaning.reserve(meaning.size());
    for (const auto& t : meaning) rec.meaning.push_back(corpus.meaning_vocab.intern(t));
    detail::sort_unique(rec.meaning);
    corpus.records.push_back(std::move(rec));
  }
  if (in.bad()) throw io_error("error while reading: " + path);
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (const Record& rec : corpus.records) {
    nlohmann::ordered_json j;
    auto& form = j["form"] = nlohmann::json::array();
    for (TokenId t : rec.form) form.push_back(corpus.form_vocab.token(t));
    auto& meaning = j["meaning"] = nlohmann::json::array();
    for (TokenId t : rec.meaning) meaning.push_back(corpus.meaning_vocab.token(t));
    out << j.dump() << '\n';
  }
  if (!out) throw io_error("error while writing: " + path);
}

/// One line per morpheme, in selection order.
inline void save_inventory(const Inventory& inv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (const Morpheme& m : inv.morphemes) {
    nlohmann::ordered_json j;
    auto& form = j["form"] = nlohmann::json::array();
    for (TokenId t : m.form) form.push_back(inv.form_vocab.token(t));
    auto& meaning = j["meaning"] = nlohmann::json::array();
    for (TokenId t : m.meaning) meaning.push_back(inv.meaning_vocab.token(t));
    j["weight"] = m.weight;
    j["initial_weight"] = m.initial_weight;
    j["order"] = m.order;
    j["prevalence"] = m.prevalence;
    out << j.dump() << '\n';
  }
  if (!out) throw io_error("error while writing: " + path);
}

inline Inventory load_inventory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open inventory file: " + path);
  Inventory inv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank_line(line)) continue;
    nlohmann::json j = detail::parse_line(line, path, line_no);
    if (!j.contains("form") || !j.contains("meaning"))
      throw parse_error(path, line_no, "missing \"form\" or \"meaning\" key");
    Morpheme m;
    for (const auto& t : detail::token_array(j["form"], path, line_no, "form"))
      m.form.push_back(inv.form_vocab.intern(t));
    for (const auto& t : detail::token_array(j["meaning"], path, line_no, "meaning"))
      m.meaning.push_back(inv.meaning_vocab.intern(t));
    m.weight = j.value("weight", 0.0);
    m.initial_weight = j.value("initial_weight", 0.0);
    m.order = j.value("order", static_cast<std::uint32_t>(inv.morphemes.size()));
    m.prevalence = j.value("prevalence", 0.0);
    inv.morphemes.push_back(std::move(m));
  }
  return inv;
}

/// Ground-truth files are inventories with only form/meaning fields.
inline void save_pairs(const Inventory& inv, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (const Morpheme& m : inv.morphemes) {
    nlohmann::ordered_json j;
    auto& form = j["form"] = nlohmann::json::array();
    for (TokenId t : m.form) form.push_back(inv.form_vocab.token(t));
    auto& meaning = j["meaning"] = nlohmann::json::array();
    for (TokenId t : m.meaning) meaning.push_back(inv.meaning_vocab.token(t));
    out << j.dump() << '\n';
  }
  if (!out) throw io_error("error while writing: " + path);
}

}  // namespace csar
