#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "csar/corpus.hpp"

namespace csar {

/// Morphemes lifted to surface strings so inventories from different
/// vocabularies compare directly. Meanings are canonical sorted sets.
struct EvalMorpheme {
  std::vector<std::string> form;
  std::vector<std::string> meaning;
};

inline std::vector<EvalMorpheme> to_eval(const Inventory& inv) {
  std::vector<EvalMorpheme> out;
  out.reserve(inv.morphemes.size());
  for (const auto& m : inv.morphemes) {
    EvalMorpheme e;
    e.form = inv.form_surface(m);
    e.meaning = inv.meaning_surface(m);
    std::sort(e.meaning.begin(), e.meaning.end());
    e.meaning.erase(std::unique(e.meaning.begin(), e.meaning.end()),
                    e.meaning.end());
    out.push_back(std::move(e));
  }
  return out;
}

namespace evaldetail {

/// Longest common subsequence length; the minimal insertion+deletion edit
/// distance is |a| + |b| - 2 lcs.
template <typename T>
std::size_t lcs_length(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename T>
double jaccard(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::size_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace evaldetail

/// 1 - (insertions + deletions) / (|a| + |b|), via the LCS identity.
template <typename T>
double fuzzy_form_similarity_seq(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double lcs = static_cast<double>(evaldetail::lcs_length(a, b));
  return 2.0 * lcs / static_cast<double>(a.size() + b.size());
}

inline double fuzzy_form_similarity(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  return fuzzy_form_similarity_seq(a, b);
}

/// min(form similarity, Jaccard index of the meaning sets).
inline double fuzzy_similarity(const EvalMorpheme& a, const EvalMorpheme& b) {
  return std::min(fuzzy_form_similarity(a.form, b.form),
                  evaldetail::jaccard(a.meaning, b.meaning));
}

inline double exact_similarity(const EvalMorpheme& a, const EvalMorpheme& b) {
  return a.form == b.form && a.meaning == b.meaning ? 1.0 : 0.0;
}

inline double fuzzy_form_only_similarity(const EvalMorpheme& a,
                                         const EvalMorpheme& b) {
  return fuzzy_form_similarity(a.form, b.form);
}

inline double exact_form_only_similarity(const EvalMorpheme& a,
                                         const EvalMorpheme& b) {
  return a.form == b.form ? 1.0 : 0.0;
}

/// Mean best-match similarity of induced morphemes against the truth;
/// duplicates in the inventory are scored as distinct elements.
template <typename SimFn>
double precision(const std::vector<EvalMorpheme>& induced,
                 const std::vector<EvalMorpheme>& truth, const SimFn& sim) {
  if (induced.empty() || truth.empty()) return 0.0;
  double total = 0.0;
  for (const auto& i : induced) {
    double best = 0.0;
    for (const auto& g : truth) best = std::max(best, sim(i, g));
    total += best;
  }
  return total / static_cast<double>(induced.size());
}

template <typename SimFn>
double recall(const std::vector<EvalMorpheme>& induced,
              const std::vector<EvalMorpheme>& truth, const SimFn& sim) {
  return precision(truth, induced, sim);
}

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

template <typename SimFn>
Scores score(const std::vector<EvalMorpheme>& induced,
             const std::vector<EvalMorpheme>& truth, const SimFn& sim) {
  Scores s;
  s.precision = precision(induced, truth, sim);
  s.recall = recall(induced, truth, sim);
  s.f1 = (s.precision + s.recall) > 0
             ? 2 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

struct EvalReport {
  Scores exact_full;
  Scores fuzzy_full;
  Scores exact_form;
  Scores fuzzy_form;
  std::size_t n_induced = 0;
  std::size_t n_truth = 0;
  /// Set when the corpus contains noise forms: form-only numbers are
  /// reported but must not enter form-only aggregates.
  bool form_only_noise_flagged = false;
};

inline EvalReport evaluate(const Inventory& induced, const Inventory& truth,
                           bool corpus_has_noise = false) {
  EvalReport r;
  const auto I = to_eval(induced);
  const auto G = to_eval(truth);
  r.n_induced = I.size();
  r.n_truth = G.size();
  r.exact_full = score(I, G, exact_similarity);
  r.fuzzy_full = score(I, G, fuzzy_similarity);
  r.exact_form = score(I, G, exact_form_only_similarity);
  r.fuzzy_form = score(I, G, fuzzy_form_only_similarity);
  r.form_only_noise_flagged = corpus_has_noise;
  return r;
}

/// Trivial baseline: the inventory is the set of distinct records.
inline Inventory record_baseline(const Corpus& corpus) {
  Inventory inv;
  inv.form_vocab = corpus.form_vocab;
  inv.meaning_vocab = corpus.meaning_vocab;
  std::map<std::pair<std::vector<TokenId>, std::vector<TokenId>>, std::size_t> index;
  std::vector<std::size_t> counts;
  for (const auto& rec : corpus.records) {
    auto key = std::make_pair(rec.form, rec.meaning);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(std::move(key), inv.morphemes.size());
      Morpheme m;
      m.form = rec.form;
      m.meaning = rec.meaning;
      m.order = static_cast<std::uint32_t>(inv.morphemes.size());
      inv.morphemes.push_back(std::move(m));
      counts.push_back(1);
    } else {
      ++counts[it->second];
    }
  }
  for (std::size_t i = 0; i < inv.morphemes.size(); ++i)
    inv.morphemes[i].prevalence = static_cast<double>(counts[i]) /
                                  static_cast<double>(corpus.records.size());
  return inv;
}

/// Target vocabulary for the tokenizer baselines: mean form tokens per
/// meaning token, scaled by the meaning token inventory, plus base tokens.
inline std::size_t bpe_target_vocab(const Corpus& corpus) {
  if (corpus.records.empty()) return 0;
  double ratio_sum = 0.0;
  for (const auto& rec : corpus.records)
    ratio_sum += static_cast<double>(rec.form.size()) /
                 static_cast<double>(rec.meaning.size());
  const double mean_ratio = ratio_sum / static_cast<double>(corpus.records.size());
  return static_cast<std::size_t>(
             std::floor(static_cast<double>(corpus.meaning_vocab.size()) *
                        mean_ratio)) +
         corpus.form_vocab.size();
}

/// Byte pair encoding over forms: repeatedly merges the most frequent
/// adjacent symbol pair (ties to the first seen) until the target vocabulary
/// is reached or no pair repeats. The inventory is the learned multi-token
/// symbols plus the base tokens, with empty meanings.
inline Inventory bpe_baseline(const Corpus& corpus) {
  Inventory inv;
  inv.form_vocab = corpus.form_vocab;

  const std::size_t base = corpus.form_vocab.size();
  const std::size_t target = bpe_target_vocab(corpus);

  // symbol id -> token sequence; ids < base are single tokens
  std::vector<std::vector<TokenId>> symbols(base);
  for (std::size_t t = 0; t < base; ++t)
    symbols[t] = {static_cast<TokenId>(t)};
  std::vector<std::vector<std::uint32_t>> seqs;
  seqs.reserve(corpus.records.size());
  for (const auto& rec : corpus.records) {
    std::vector<std::uint32_t> s(rec.form.begin(), rec.form.end());
    seqs.push_back(std::move(s));
  }

  std::vector<std::size_t> merged_order;
  while (symbols.size() < target) {
    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::pair<std::size_t, std::size_t>>
        pair_stats;  // -> (count, first-seen index)
    std::size_t seen = 0;
    for (const auto& s : seqs) {
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        auto [it, inserted] =
            pair_stats.try_emplace({s[i], s[i + 1]}, std::make_pair(0, seen));
        ++it->second.first;
        ++seen;
      }
    }
    std::pair<std::uint32_t, std::uint32_t> best{};
    std::size_t best_count = 0, best_seen = 0;
    for (const auto& [pair, stats] : pair_stats) {
      if (stats.first > best_count ||
          (stats.first == best_count && stats.second < best_seen)) {
        best = pair;
        best_count = stats.first;
        best_seen = stats.second;
      }
    }
    if (best_count < 2) break;
    const auto new_id = static_cast<std::uint32_t>(symbols.size());
    std::vector<TokenId> merged = symbols[best.first];
    merged.insert(merged.end(), symbols[best.second].begin(),
                  symbols[best.second].end());
    symbols.push_back(std::move(merged));
    merged_order.push_back(new_id);
    for (auto& s : seqs) {
      std::vector<std::uint32_t> out;
      out.reserve(s.size());
      std::size_t i = 0;
      while (i < s.size()) {
        if (i + 1 < s.size() && s[i] == best.first && s[i + 1] == best.second) {
          out.push_back(new_id);
          i += 2;
        } else {
          out.push_back(s[i]);
          ++i;
        }
      }
      s = std::move(out);
    }
  }

  for (auto id : merged_order) {
    Morpheme m;
    m.form = symbols[id];
    m.order = static_cast<std::uint32_t>(inv.morphemes.size());
    inv.morphemes.push_back(std::move(m));
  }
  for (std::size_t t = 0; t < base; ++t) {
    Morpheme m;
    m.form = symbols[t];
    m.order = static_cast<std::uint32_t>(inv.morphemes.size());
    inv.morphemes.push_back(std::move(m));
  }
  return inv;
}

}  // namespace csar
