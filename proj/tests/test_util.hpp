#pragma once

#include <string>
#include <vector>

#include "csar/corpus.hpp"

namespace csar::test {

/// Builds a corpus from (form tokens, meaning tokens) surface pairs.
inline Corpus make_corpus(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>&
        data) {
  Corpus c;
  for (const auto& [form, meaning] : data) {
    Record rec;
    for (const auto& t : form) rec.form.push_back(c.form_vocab.intern(t));
    for (const auto& t : meaning) rec.meaning.push_back(c.meaning_vocab.intern(t));
    detail::sort_unique(rec.meaning);
    c.records.push_back(std::move(rec));
  }
  return c;
}

/// Splits "a b c" into single-character-ish tokens on spaces.
inline std::vector<std::string> toks(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// The three-record corpus used throughout: ("s",{sq}), ("st",{sq,x}),
/// ("ct",{o,x}).
inline Corpus tiny_corpus() {
  return make_corpus({
      {{"s"}, {"sq"}},
      {{"s", "t"}, {"sq", "x"}},
      {{"c", "t"}, {"o", "x"}},
  });
}

}  // namespace csar::test
