#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "csar/corpus.hpp"
#include "csar/rng.hpp"
#include "csar/weighting.hpp"

namespace csar {

class induction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InductionConfig {
  Weighting weighting = Weighting::mutual_information;
  std::optional<std::size_t> max_records;
  std::optional<std::size_t> max_inventory_size;
  std::optional<std::size_t> max_form_size;
  std::optional<std::size_t> max_meaning_size;
  std::optional<std::size_t> form_vocab_size;
  std::optional<std::size_t> meaning_vocab_size;
  std::optional<std::size_t> token_vocab_size;
  std::uint32_t cooccurrence_threshold = 0;
  bool search_best_form = true;
  bool ngram_semantics = false;
  std::optional<double> time_limit_seconds;
  std::uint64_t seed = 0;

  void validate() const {
    auto positive = [](const std::optional<std::size_t>& v, const char* name) {
      if (v && *v < 1)
        throw config_error(std::string(name) + " must be at least 1");
    };
    positive(max_records, "max-records");
    positive(max_inventory_size, "max-inventory-size");
    positive(max_form_size, "max-form-size");
    positive(max_meaning_size, "max-meaning-size");
    positive(form_vocab_size, "form-vocab-size");
    positive(meaning_vocab_size, "meaning-vocab-size");
    positive(token_vocab_size, "token-vocab-size");
    if (time_limit_seconds && *time_limit_seconds <= 0)
      throw config_error("time-limit must be positive");
  }
};

/// Interned pool of candidate token sequences with open-address lookup.
class CandidateSet {
 public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t find_or_add(std::span<const TokenId> tokens) {
    maybe_grow();
    std::size_t slot = probe(tokens);
    if (table_[slot] != npos) return table_[slot];
    const auto id = static_cast<std::uint32_t>(spans_.size());
    spans_.emplace_back(static_cast<std::uint32_t>(pool_.size()),
                        static_cast<std::uint32_t>(tokens.size()));
    pool_.insert(pool_.end(), tokens.begin(), tokens.end());
    table_[slot] = id;
    ++count_;
    return id;
  }

  std::uint32_t find(std::span<const TokenId> tokens) const {
    if (table_.empty()) return npos;
    return table_[probe(tokens)];
  }

  std::span<const TokenId> tokens(std::uint32_t id) const {
    const auto& [off, len] = spans_[id];
    return {pool_.data() + off, len};
  }

  std::size_t size() const { return spans_.size(); }

 private:
  std::size_t probe(std::span<const TokenId> tokens) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (TokenId t : tokens) h = hash_combine(h, t);
    std::size_t i = h & mask_;
    for (;;) {
      const std::uint32_t id = table_[i];
      if (id == npos) return i;
      auto existing = this->tokens(id);
      if (existing.size() == tokens.size() &&
          std::equal(existing.begin(), existing.end(), tokens.begin()))
        return i;
      i = (i + 1) & mask_;
    }
  }

  void maybe_grow() {
    if (table_.empty()) {
      table_.assign(1024, npos);
      mask_ = 1023;
      return;
    }
    if (count_ * 10 < table_.size() * 7) return;
    std::vector<std::uint32_t> old = std::move(table_);
    table_.assign(old.size() * 2, npos);
    mask_ = table_.size() - 1;
    for (std::uint32_t id : old) {
      if (id == npos) continue;
      table_[probe(tokens(id))] = id;
    }
  }

  std::vector<TokenId> pool_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans_;
  std::vector<std::uint32_t> table_;
  std::size_t mask_ = 0;
  std::size_t count_ = 0;
};

/// Per-record surviving material. Ablation splits form segments; candidates
/// never span segment boundaries.
struct RecordState {
  std::vector<std::vector<TokenId>> form_segments;
  std::vector<TokenId> meaning_tokens;                 // set semantics
  std::vector<std::vector<TokenId>> meaning_segments;  // n-gram semantics
};

/// Sparse binary occurrence structure: candidate ids present in each record
/// under the current record states, plus per-candidate record counts.
struct CandidateUniverse {
  CandidateSet forms;
  CandidateSet meanings;
  std::vector<std::vector<std::uint32_t>> record_forms;
  std::vector<std::vector<std::uint32_t>> record_meanings;
  std::vector<std::uint64_t> form_count;
  std::vector<std::uint64_t> meaning_count;
};

namespace detail {

inline void collect_segment_subsequences(const std::vector<TokenId>& seg,
                                         std::size_t max_len, CandidateSet& set,
                                         bool add, std::vector<std::uint32_t>& out) {
  const std::size_t n = seg.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t top = std::min(max_len, n - i);
    for (std::size_t len = 1; len <= top; ++len) {
      std::span<const TokenId> span(seg.data() + i, len);
      const std::uint32_t id = add ? set.find_or_add(span) : set.find(span);
      if (id != CandidateSet::npos) out.push_back(id);
    }
  }
}

inline void collect_subsets(const std::vector<TokenId>& set_tokens,
                            std::size_t max_size, CandidateSet& set, bool add,
                            std::vector<std::uint32_t>& out) {
  const std::size_t n = set_tokens.size();
  const std::size_t top = std::min(max_size, n);
  // Guard against runaway subset lattices; the max-meaning-size knob is the
  // intended control for corpora with very large meanings.
  if (n > 22 && top > 22)
    throw induction_error(
        "meaning set of size " + std::to_string(n) +
        " would enumerate too many subsets; set max-meaning-size");
  std::vector<TokenId> buf;
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= top; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      buf.clear();
      for (std::size_t i : idx) buf.push_back(set_tokens[i]);
      const std::uint32_t id = add ? set.find_or_add(buf) : set.find(buf);
      if (id != CandidateSet::npos) out.push_back(id);
      // next k-combination
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

inline void sort_unique_ids(std::vector<std::uint32_t>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

/// Keep flags for the top-k most frequent tokens (ties to lower ids).
inline std::vector<char> top_token_filter(const std::vector<std::uint64_t>& freq,
                                          std::size_t k) {
  std::vector<std::uint32_t> order(freq.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return a < b;
  });
  std::vector<char> keep(freq.size(), 0);
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) keep[order[i]] = 1;
  return keep;
}

}  // namespace detail

inline std::vector<RecordState> initial_states(const Corpus& corpus,
                                               const InductionConfig& config) {
  std::vector<RecordState> states;
  const std::size_t n = config.max_records
                            ? std::min(*config.max_records, corpus.records.size())
                            : corpus.records.size();
  states.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Record& rec = corpus.records[j];
    RecordState st;
    st.form_segments.push_back(rec.form);
    if (config.ngram_semantics)
      st.meaning_segments.push_back(rec.meaning);
    else
      st.meaning_tokens = rec.meaning;
    states.push_back(std::move(st));
  }
  return states;
}

/// Enumerates form and meaning candidates with their occurrence structure,
/// applying the token-vocabulary and candidate-vocabulary knobs.
inline CandidateUniverse enumerate_candidates(const Corpus& corpus,
                                              const InductionConfig& config) {
  config.validate();
  const auto states = initial_states(corpus, config);
  if (states.empty()) throw induction_error("corpus is empty");
  CandidateUniverse u;
  const std::size_t max_form =
      config.max_form_size.value_or(std::numeric_limits<std::size_t>::max());
  const std::size_t max_meaning =
      config.max_meaning_size.value_or(std::numeric_limits<std::size_t>::max());

  // Token-level filtering: drop candidates containing a non-top token.
  std::vector<char> keep_form_token, keep_meaning_token;
  if (config.token_vocab_size) {
    std::vector<std::uint64_t> ffreq(corpus.form_vocab.size(), 0);
    std::vector<std::uint64_t> mfreq(corpus.meaning_vocab.size(), 0);
    for (const auto& st : states) {
      for (const auto& seg : st.form_segments)
        for (TokenId t : seg) ++ffreq[t];
      if (config.ngram_semantics) {
        for (const auto& seg : st.meaning_segments)
          for (TokenId t : seg) ++mfreq[t];
      } else {
        for (TokenId t : st.meaning_tokens) ++mfreq[t];
      }
    }
    keep_form_token = detail::top_token_filter(ffreq, *config.token_vocab_size);
    keep_meaning_token = detail::top_token_filter(mfreq, *config.token_vocab_size);
  }

  auto collect_runs = [](const std::vector<TokenId>& seg,
                         const std::vector<char>& keep, std::size_t max_len,
                         CandidateSet& set, std::vector<std::uint32_t>& out) {
    std::vector<TokenId> run;
    for (TokenId t : seg) {
      if (keep[t]) {
        run.push_back(t);
      } else if (!run.empty()) {
        detail::collect_segment_subsequences(run, max_len, set, true, out);
        run.clear();
      }
    }
    if (!run.empty()) detail::collect_segment_subsequences(run, max_len, set, true, out);
  };

  u.record_forms.resize(states.size());
  u.record_meanings.resize(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const RecordState& st = states[j];
    auto& forms = u.record_forms[j];
    auto& meanings = u.record_meanings[j];
    for (const auto& seg : st.form_segments) {
      if (keep_form_token.empty())
        detail::collect_segment_subsequences(seg, max_form, u.forms, true, forms);
      else
        collect_runs(seg, keep_form_token, max_form, u.forms, forms);
    }
    if (config.ngram_semantics) {
      for (const auto& seg : st.meaning_segments) {
        if (keep_meaning_token.empty())
          detail::collect_segment_subsequences(seg, max_meaning, u.meanings, true,
                                               meanings);
        else
          collect_runs(seg, keep_meaning_token, max_meaning, u.meanings, meanings);
      }
    } else {
      std::vector<TokenId> toks;
      toks.reserve(st.meaning_tokens.size());
      for (TokenId t : st.meaning_tokens)
        if (keep_meaning_token.empty() || keep_meaning_token[t]) toks.push_back(t);
      detail::collect_subsets(toks, max_meaning, u.meanings, true, meanings);
    }
    detail::sort_unique_ids(forms);
    detail::sort_unique_ids(meanings);
  }
  u.form_count.assign(u.forms.size(), 0);
  u.meaning_count.assign(u.meanings.size(), 0);
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (auto f : u.record_forms[j]) ++u.form_count[f];
    for (auto m : u.record_meanings[j]) ++u.meaning_count[m];
  }

  // Candidate-vocabulary knobs keep only the most frequent candidates.
  auto shrink = [&](CandidateSet& set, std::vector<std::uint64_t>& counts,
                    std::size_t limit,
                    std::vector<std::vector<std::uint32_t>>& record_lists) {
    if (counts.size() <= limit) return;
    std::vector<std::uint32_t> order(counts.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (counts[a] != counts[b]) return counts[a] > counts[b];
      return a < b;
    });
    std::vector<std::uint32_t> remap(counts.size(), CandidateSet::npos);
    CandidateSet compact;
    std::vector<std::uint64_t> new_counts;
    for (std::size_t i = 0; i < limit; ++i) {
      const std::uint32_t old_id = order[i];
      remap[old_id] = compact.find_or_add(set.tokens(old_id));
      new_counts.push_back(counts[old_id]);
    }
    for (auto& lst : record_lists) {
      std::vector<std::uint32_t> out;
      out.reserve(lst.size());
      for (auto id : lst)
        if (remap[id] != CandidateSet::npos) out.push_back(remap[id]);
      detail::sort_unique_ids(out);
      lst = std::move(out);
    }
    set = std::move(compact);
    counts = std::move(new_counts);
  };
  if (config.form_vocab_size)
    shrink(u.forms, u.form_count, *config.form_vocab_size, u.record_forms);
  if (config.meaning_vocab_size)
    shrink(u.meanings, u.meaning_count, *config.meaning_vocab_size, u.record_meanings);

  if (u.forms.size() == 0 || u.meanings.size() == 0)
    throw induction_error("candidate universe is empty after filtering");
  return u;
}

/// Dense occurrence matrix (records x candidates) for tests and goldens.
inline std::vector<std::vector<std::uint8_t>> dense_occurrence(
    const std::vector<std::vector<std::uint32_t>>& record_lists,
    std::size_t n_candidates) {
  std::vector<std::vector<std::uint8_t>> out(
      record_lists.size(), std::vector<std::uint8_t>(n_candidates, 0));
  for (std::size_t j = 0; j < record_lists.size(); ++j)
    for (auto id : record_lists[j]) out[j][id] = 1;
  return out;
}

struct MatchSpan {
  std::uint32_t segment = 0;
  std::uint32_t offset = 0;
  bool operator==(const MatchSpan&) const = default;
};

inline std::vector<MatchSpan> find_matches(
    const std::vector<std::vector<TokenId>>& segments,
    std::span<const TokenId> form) {
  std::vector<MatchSpan> out;
  for (std::uint32_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (seg.size() < form.size()) continue;
    for (std::uint32_t off = 0; off + form.size() <= seg.size(); ++off) {
      if (std::equal(form.begin(), form.end(), seg.begin() + off))
        out.push_back({s, off});
    }
  }
  return out;
}

/// Best competitor weight for a span: the callback receives the tokens of an
/// overlapping candidate span and whether it coincides with the occurrence
/// being scored (so the pair under application can be excluded there).
using CompetitorFn = std::function<double(std::span<const TokenId>, bool same_span)>;

/// Ambiguous application: pick the occurrence whose strongest overlapping
/// competitor is weakest; ties resolve to the leftmost occurrence.
inline MatchSpan choose_match_span(const std::vector<std::vector<TokenId>>& segments,
                                   std::span<const TokenId> form,
                                   const std::vector<MatchSpan>& matches,
                                   std::size_t max_len,
                                   const CompetitorFn& competitor) {
  assert(!matches.empty());
  if (matches.size() == 1) return matches[0];
  MatchSpan best = matches[0];
  double best_score = std::numeric_limits<double>::infinity();
  for (const MatchSpan& occ : matches) {
    const auto& seg = segments[occ.segment];
    const std::size_t a = occ.offset;
    const std::size_t b = occ.offset + form.size();
    double score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < seg.size() && c < b; ++c) {
      const std::size_t top = std::min(max_len, seg.size() - c);
      for (std::size_t len = 1; len <= top; ++len) {
        if (c + len <= a) continue;  // ends before the occurrence
        const bool same = (c == a && len == form.size());
        const double w = competitor({seg.data() + c, len}, same);
        if (w > score) score = w;
      }
    }
    if (score < best_score) {
      best_score = score;
      best = occ;
    }
  }
  return best;
}

struct ProgressEvent {
  std::size_t iteration = 0;
  const Morpheme* morpheme = nullptr;
  std::size_t ablated_records = 0;
};
using ProgressFn = std::function<void(const ProgressEvent&)>;

/// The CSAR main loop: count, select, ablate, repeat.
///
/// Effective weights follow the cap rule: a pair's weight at any iteration is
/// the minimum of its fresh weight and every weight it was assigned before.
/// After each ablation, exactly the pairs whose contingency counts changed are
/// re-weighted, which reproduces full recomputation bit-for-bit because an
/// unchanged fresh weight cannot lower a running minimum.
class InductionEngine {
 public:
  InductionEngine(const Corpus& corpus, InductionConfig config)
      : config_(std::move(config)) {
    config_.validate();
    universe_ = enumerate_candidates(corpus, config_);
    states_ = initial_states(corpus, config_);
    n_records_ = states_.size();
    form_vocab_ = corpus.form_vocab;
    meaning_vocab_ = corpus.meaning_vocab;
    max_form_len_ =
        config_.max_form_size.value_or(std::numeric_limits<std::size_t>::max());
    build_pairs();
    start_ = std::chrono::steady_clock::now();
  }

  const CandidateUniverse& universe() const { return universe_; }
  const std::vector<RecordState>& states() const { return states_; }
  std::size_t iterations() const { return iteration_; }

  std::uint32_t cooccurrence_count(std::span<const TokenId> form,
                                   std::span<const TokenId> meaning) const {
    const auto f = universe_.forms.find(form);
    const auto m = universe_.meanings.find(meaning);
    if (f == CandidateSet::npos || m == CandidateSet::npos) return 0;
    const Slot* slot = find_slot(pair_key(f, m));
    return slot ? slot->count : 0;
  }

  /// Current capped weight of a pair (0 if unknown or dead).
  double current_weight(std::span<const TokenId> form,
                        std::span<const TokenId> meaning) const {
    const auto f = universe_.forms.find(form);
    const auto m = universe_.meanings.find(meaning);
    if (f == CandidateSet::npos || m == CandidateSet::npos) return 0.0;
    const Slot* slot = find_slot(pair_key(f, m));
    return slot && slot->cap > 0.0 ? slot->cap : 0.0;
  }

  /// Runs select+ablate once; empty when a stop condition is reached.
  std::optional<Morpheme> step() {
    if (config_.max_inventory_size && selected_ >= *config_.max_inventory_size)
      return std::nullopt;
    if (config_.time_limit_seconds) {
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start_;
      if (elapsed.count() >= *config_.time_limit_seconds) return std::nullopt;
    }
    auto pick = select_pair();
    if (!pick) return std::nullopt;
    const auto [f, m, weight] = *pick;
    Morpheme morpheme;
    auto ftoks = universe_.forms.tokens(f);
    auto mtoks = universe_.meanings.tokens(m);
    morpheme.form.assign(ftoks.begin(), ftoks.end());
    morpheme.meaning.assign(mtoks.begin(), mtoks.end());
    morpheme.weight = weight;
    morpheme.initial_weight = find_slot(pair_key(f, m))->initial;
    morpheme.order = static_cast<std::uint32_t>(selected_);
    const std::size_t ablated = ablate(f, m);
    morpheme.prevalence =
        static_cast<double>(ablated) / static_cast<double>(n_records_);
    find_slot(pair_key(f, m))->cap = 0.0;  // a selected pair is never re-selected
    ++selected_with_form_[f];
    ++selected_;
    last_ablated_ = ablated;
    return morpheme;
  }

  Inventory run(const ProgressFn& progress = {}) {
    Inventory inv;
    inv.form_vocab = form_vocab_;
    inv.meaning_vocab = meaning_vocab_;
    while (auto m = step()) {
      inv.morphemes.push_back(std::move(*m));
      if (progress) {
        ProgressEvent ev;
        ev.iteration = iteration_;
        ev.morpheme = &inv.morphemes.back();
        ev.ablated_records = last_ablated_;
        progress(ev);
      }
    }
    return inv;
  }

  /// Forced ablation of an arbitrary co-occurring pair; returns the number of
  /// records modified.
  std::size_t apply_pair(std::span<const TokenId> form,
                         std::span<const TokenId> meaning) {
    const auto f = universe_.forms.find(form);
    const auto m = universe_.meanings.find(meaning);
    if (f == CandidateSet::npos || m == CandidateSet::npos)
      throw induction_error("pair is not in the candidate universe");
    const Slot* slot = find_slot(pair_key(f, m));
    if (!slot || slot->count == 0)
      throw induction_error("pair has no co-occurrences to ablate");
    return ablate(f, m);
  }

 private:
  struct Slot {
    std::uint64_t key = kEmptyKey;
    double cap = 0.0;
    float initial = 0.0f;
    std::uint32_t count = 0;
  };
  static constexpr std::uint64_t kEmptyKey = ~0ull;

  struct HeapEntry {
    double w;
    std::uint64_t key;
  };
  struct HeapLess {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      if (a.w != b.w) return a.w < b.w;
      return a.key > b.key;
    }
  };

  static std::uint64_t pair_key(std::uint32_t f, std::uint32_t m) {
    return (static_cast<std::uint64_t>(f) << 32) | m;
  }
  static std::uint32_t key_form(std::uint64_t key) {
    return static_cast<std::uint32_t>(key >> 32);
  }
  static std::uint32_t key_meaning(std::uint64_t key) {
    return static_cast<std::uint32_t>(key & 0xffffffffull);
  }

  // --- pair table (open addressing, no deletion; cap == 0 marks dead) ---

  Slot* find_slot(std::uint64_t key) {
    if (slots_.empty()) return nullptr;
    std::size_t i = splitmix64(key) & slot_mask_;
    for (;;) {
      Slot& s = slots_[i];
      if (s.key == key) return &s;
      if (s.key == kEmptyKey) return nullptr;
      i = (i + 1) & slot_mask_;
    }
  }
  const Slot* find_slot(std::uint64_t key) const {
    return const_cast<InductionEngine*>(this)->find_slot(key);
  }

  Slot& get_or_insert(std::uint64_t key) {
    if (slot_used_ * 10 >= slots_.size() * 6) grow_slots();
    std::size_t i = splitmix64(key) & slot_mask_;
    for (;;) {
      Slot& s = slots_[i];
      if (s.key == key) return s;
      if (s.key == kEmptyKey) {
        s.key = key;
        ++slot_used_;
        return s;
      }
      i = (i + 1) & slot_mask_;
    }
  }

  void grow_slots() {
    const std::size_t new_size = slots_.empty() ? 4096 : slots_.size() * 2;
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(new_size, Slot{});
    slot_mask_ = new_size - 1;
    for (const Slot& s : old) {
      if (s.key == kEmptyKey) continue;
      std::size_t i = splitmix64(s.key) & slot_mask_;
      while (slots_[i].key != kEmptyKey) i = (i + 1) & slot_mask_;
      slots_[i] = s;
    }
  }

  // --- initialization ---

  void build_pairs() {
    grow_slots();
    for (std::size_t j = 0; j < n_records_; ++j) {
      for (auto f : universe_.record_forms[j])
        for (auto m : universe_.record_meanings[j])
          ++get_or_insert(pair_key(f, m)).count;
    }
    selected_with_form_.assign(universe_.forms.size(), 0);
    partners_of_form_.assign(universe_.forms.size(), {});
    partners_of_meaning_.assign(universe_.meanings.size(), {});
    std::vector<HeapEntry> entries;
    for (Slot& s : slots_) {
      if (s.key == kEmptyKey) continue;
      const auto f = key_form(s.key);
      const auto m = key_meaning(s.key);
      const double w = fresh_weight(f, m, s.count);
      if (w <= 0.0) {
        s.cap = 0.0;
        continue;
      }
      s.cap = w;
      s.initial = static_cast<float>(w);
      entries.push_back({w, s.key});
      partners_of_form_[f].push_back(m);
      partners_of_meaning_[m].push_back(f);
    }
    heap_ = Heap(HeapLess{}, std::move(entries));
  }

  double fresh_weight(std::uint32_t f, std::uint32_t m, std::uint32_t count) const {
    const std::uint32_t effective =
        count >= std::max<std::uint32_t>(config_.cooccurrence_threshold, 1) ? count
                                                                            : 0;
    return pair_weight(effective, universe_.form_count[f],
                       universe_.meaning_count[m], n_records_, config_.weighting);
  }

  // --- selection ---

  /// The heap always holds one entry keyed by each live pair's current
  /// effective weight (entries with other keys are stale and skipped), so the
  /// top run of equal keys is exactly the set of maximal pairs.
  std::optional<std::tuple<std::uint32_t, std::uint32_t, double>> select_pair() {
    double best_w = 0.0;
    bool have = false;
    ties_.clear();
    while (!heap_.empty()) {
      const HeapEntry top = heap_.top();
      if (have && top.w < best_w) break;
      heap_.pop();
      const Slot* slot = find_slot(top.key);
      if (!slot || slot->cap <= 0.0 || top.w != slot->cap) continue;
      if (!have) {
        have = true;
        best_w = top.w;
      }
      ties_.push_back(top.key);
    }
    if (!have) return std::nullopt;
    const std::uint64_t winner = ties_.size() == 1 ? ties_.front() : break_ties();
    for (std::uint64_t key : ties_)
      if (key != winner) heap_.push({best_w, key});
    return std::make_tuple(key_form(winner), key_meaning(winner), best_w);
  }

  /// Tie order: higher initial weight, fewer selected pairs with this form,
  /// larger form, smaller meaning, then lexicographic on token ids.
  std::uint64_t break_ties() const {
    auto better = [&](std::uint64_t a, std::uint64_t b) {
      const Slot* sa = find_slot(a);
      const Slot* sb = find_slot(b);
      if (sa->initial != sb->initial) return sa->initial > sb->initial;
      const auto fa = key_form(a), fb = key_form(b);
      if (selected_with_form_[fa] != selected_with_form_[fb])
        return selected_with_form_[fa] < selected_with_form_[fb];
      auto fta = universe_.forms.tokens(fa);
      auto ftb = universe_.forms.tokens(fb);
      if (fta.size() != ftb.size()) return fta.size() > ftb.size();
      auto mta = universe_.meanings.tokens(key_meaning(a));
      auto mtb = universe_.meanings.tokens(key_meaning(b));
      if (mta.size() != mtb.size()) return mta.size() < mtb.size();
      if (!std::equal(fta.begin(), fta.end(), ftb.begin()))
        return std::lexicographical_compare(fta.begin(), fta.end(), ftb.begin(),
                                            ftb.end());
      return std::lexicographical_compare(mta.begin(), mta.end(), mtb.begin(),
                                          mtb.end());
    };
    std::uint64_t best = ties_.front();
    for (std::size_t i = 1; i < ties_.size(); ++i)
      if (better(ties_[i], best)) best = ties_[i];
    return best;
  }

  // --- ablation ---

  std::size_t ablate(std::uint32_t f, std::uint32_t m) {
    auto form = universe_.forms.tokens(f);
    auto meaning = universe_.meanings.tokens(m);
    applied_form_ = f;
    applied_meaning_ = m;
    std::size_t ablated = 0;
    for (std::size_t j = 0; j < n_records_; ++j) {
      const auto& forms_j = universe_.record_forms[j];
      const auto& meanings_j = universe_.record_meanings[j];
      if (!std::binary_search(forms_j.begin(), forms_j.end(), f)) continue;
      if (!std::binary_search(meanings_j.begin(), meanings_j.end(), m)) continue;
      RecordState& st = states_[j];
      remove_form_occurrence(st.form_segments, form, j);
      if (config_.ngram_semantics)
        remove_meaning_ngram(st.meaning_segments, meaning);
      else
        remove_meaning_tokens(st.meaning_tokens, meaning);
      reindex_record(j);
      ++ablated;
    }
    sweep_changed();
    ++iteration_;
    return ablated;
  }

  void remove_form_occurrence(std::vector<std::vector<TokenId>>& segments,
                              std::span<const TokenId> form, std::size_t record_idx) {
    auto matches = find_matches(segments, form);
    assert(!matches.empty());
    MatchSpan pick = matches[0];
    if (matches.size() > 1) {
      if (config_.search_best_form) {
        pick = choose_match_span(segments, form, matches, max_form_len_,
                                 [&](std::span<const TokenId> span, bool same) {
                                   return competitor_weight(span, same);
                                 });
      } else {
        const std::uint64_t h = hash_combine(
            hash_combine(hash_combine(config_.seed, record_idx), iteration_),
            matches.size());
        pick = matches[h % matches.size()];
      }
    }
    split_segment(segments, pick, form.size());
  }

  static void split_segment(std::vector<std::vector<TokenId>>& segments,
                            MatchSpan at, std::size_t len) {
    std::vector<TokenId> seg = std::move(segments[at.segment]);
    std::vector<TokenId> left(seg.begin(), seg.begin() + at.offset);
    std::vector<TokenId> right(seg.begin() + at.offset + len, seg.end());
    auto it = segments.erase(segments.begin() + at.segment);
    if (!right.empty()) it = segments.insert(it, std::move(right));
    if (!left.empty()) segments.insert(it, std::move(left));
  }

  static void remove_meaning_tokens(std::vector<TokenId>& set_tokens,
                                    std::span<const TokenId> meaning) {
    std::vector<TokenId> out;
    out.reserve(set_tokens.size());
    std::set_difference(set_tokens.begin(), set_tokens.end(), meaning.begin(),
                        meaning.end(), std::back_inserter(out));
    set_tokens = std::move(out);
  }

  void remove_meaning_ngram(std::vector<std::vector<TokenId>>& segments,
                            std::span<const TokenId> meaning) {
    auto matches = find_matches(segments, meaning);
    assert(!matches.empty());
    split_segment(segments, matches[0], meaning.size());
  }

  /// Strongest live pair whose form is this span; the pair being applied does
  /// not compete against itself at its own occurrence.
  double competitor_weight(std::span<const TokenId> span, bool same_span) {
    const auto f = universe_.forms.find(span);
    if (f == CandidateSet::npos) return -std::numeric_limits<double>::infinity();
    auto& list = partners_of_form_[f];
    double best = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < list.size()) {
      const std::uint32_t m = list[i];
      Slot* slot = find_slot(pair_key(f, m));
      if (!slot || slot->cap <= 0.0) {
        list[i] = list.back();
        list.pop_back();
        continue;
      }
      if (!(same_span && f == applied_form_ && m == applied_meaning_) &&
          slot->cap > best)
        best = slot->cap;
      ++i;
    }
    return best;
  }

  /// Recomputes a record's candidate sets after ablation and applies count
  /// deltas. Candidate sets only ever shrink.
  void reindex_record(std::size_t j) {
    std::vector<std::uint32_t> old_forms = std::move(universe_.record_forms[j]);
    std::vector<std::uint32_t> old_meanings = std::move(universe_.record_meanings[j]);
    std::vector<std::uint32_t> new_forms, new_meanings;
    const RecordState& st = states_[j];
    for (const auto& seg : st.form_segments)
      detail::collect_segment_subsequences(seg, max_form_len_, universe_.forms,
                                           false, new_forms);
    const std::size_t max_meaning =
        config_.max_meaning_size.value_or(std::numeric_limits<std::size_t>::max());
    if (config_.ngram_semantics) {
      for (const auto& seg : st.meaning_segments)
        detail::collect_segment_subsequences(seg, max_meaning, universe_.meanings,
                                             false, new_meanings);
    } else {
      detail::collect_subsets(st.meaning_tokens, max_meaning, universe_.meanings,
                              false, new_meanings);
    }
    detail::sort_unique_ids(new_forms);
    detail::sort_unique_ids(new_meanings);

    std::vector<std::uint32_t> removed_forms, removed_meanings;
    std::set_difference(old_forms.begin(), old_forms.end(), new_forms.begin(),
                        new_forms.end(), std::back_inserter(removed_forms));
    std::set_difference(old_meanings.begin(), old_meanings.end(),
                        new_meanings.begin(), new_meanings.end(),
                        std::back_inserter(removed_meanings));

    auto decrement = [&](std::uint32_t f, std::uint32_t m) {
      Slot* slot = find_slot(pair_key(f, m));
      assert(slot && slot->count > 0);
      --slot->count;
    };
    for (auto f : removed_forms)
      for (auto m : old_meanings) decrement(f, m);
    for (auto f : new_forms)
      for (auto m : removed_meanings) decrement(f, m);
    for (auto f : removed_forms) --universe_.form_count[f];
    for (auto m : removed_meanings) --universe_.meaning_count[m];

    changed_forms_.insert(changed_forms_.end(), removed_forms.begin(),
                          removed_forms.end());
    changed_meanings_.insert(changed_meanings_.end(), removed_meanings.begin(),
                             removed_meanings.end());

    universe_.record_forms[j] = std::move(new_forms);
    universe_.record_meanings[j] = std::move(new_meanings);
  }

  /// Re-weights every pair whose contingency changed; unchanged pairs keep
  /// their running minimum, exactly as under full recomputation.
  void sweep_changed() {
    detail::sort_unique_ids(changed_forms_);
    detail::sort_unique_ids(changed_meanings_);
    for (auto f : changed_forms_) {
      auto& list = partners_of_form_[f];
      std::size_t i = 0;
      while (i < list.size()) {
        Slot* slot = find_slot(pair_key(f, list[i]));
        if (!slot || slot->cap <= 0.0) {
          list[i] = list.back();
          list.pop_back();
          continue;
        }
        update_pair(f, list[i], *slot);
        if (slot->cap <= 0.0) {
          list[i] = list.back();
          list.pop_back();
          continue;
        }
        ++i;
      }
    }
    for (auto m : changed_meanings_) {
      auto& list = partners_of_meaning_[m];
      std::size_t i = 0;
      while (i < list.size()) {
        Slot* slot = find_slot(pair_key(list[i], m));
        if (!slot || slot->cap <= 0.0) {
          list[i] = list.back();
          list.pop_back();
          continue;
        }
        update_pair(list[i], m, *slot);
        if (slot->cap <= 0.0) {
          list[i] = list.back();
          list.pop_back();
          continue;
        }
        ++i;
      }
    }
    changed_forms_.clear();
    changed_meanings_.clear();
  }

  void update_pair(std::uint32_t f, std::uint32_t m, Slot& slot) {
    const double fresh = fresh_weight(f, m, slot.count);
    const double eff = std::min(fresh, slot.cap);
    if (eff <= 0.0) {
      slot.cap = 0.0;
      return;
    }
    if (eff < slot.cap) {
      slot.cap = eff;
      heap_.push({eff, pair_key(f, m)});
    }
  }

  InductionConfig config_;
  CandidateUniverse universe_;
  std::vector<RecordState> states_;
  Vocab form_vocab_, meaning_vocab_;
  std::size_t n_records_ = 0;
  std::size_t max_form_len_ = 0;

  std::vector<Slot> slots_;
  std::size_t slot_mask_ = 0;
  std::size_t slot_used_ = 0;

  using Heap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess>;
  Heap heap_;
  std::vector<std::uint64_t> ties_;
  std::vector<std::uint32_t> selected_with_form_;
  std::vector<std::vector<std::uint32_t>> partners_of_form_;
  std::vector<std::vector<std::uint32_t>> partners_of_meaning_;
  std::vector<std::uint32_t> changed_forms_;
  std::vector<std::uint32_t> changed_meanings_;
  std::uint32_t applied_form_ = CandidateSet::npos;
  std::uint32_t applied_meaning_ = CandidateSet::npos;

  std::size_t iteration_ = 0;
  std::size_t selected_ = 0;
  std::size_t last_ablated_ = 0;
  std::chrono::steady_clock::time_point start_;
};

inline Inventory induce(const Corpus& corpus, const InductionConfig& config,
                        const ProgressFn& progress = {}) {
  InductionEngine engine(corpus, config);
  return engine.run(progress);
}

}  // namespace csar
