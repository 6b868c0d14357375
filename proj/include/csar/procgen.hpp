#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csar/corpus.hpp"
#include "csar/rng.hpp"

namespace csar {

/// Settings for one procedurally generated language. Meanings are either one
/// value per attribute or, in sparse mode, independently present binary
/// attributes. Every knob matches one dataset variation.
struct ProcGenConfig {
  std::uint32_t n_attributes = 4;
  std::uint32_t n_values = 4;
  bool sparse_meanings = false;
  std::uint32_t synonymy = 1;           // forms per meaning
  double polysemy_rate = 0.0;           // chance a meaning reuses a form
  std::vector<std::uint32_t> form_lengths = {1};
  std::uint32_t vocab_size = 10;        // multi-token settings only
  bool imbalance = false;               // value probability ~ index+1
  std::uint32_t dataset_size = 500;
  double noise_rate = 0.0;              // 1-p of the geometric noise count
  bool shuffle = false;
  bool non_compositional = false;
  std::uint64_t seed = 0;

  bool multi_token() const {
    return form_lengths.size() > 1 ||
           (form_lengths.size() == 1 && form_lengths[0] > 1);
  }

  void validate() const {
    if (n_attributes == 0) throw config_error("n_attributes must be positive");
    if (!sparse_meanings && n_values == 0)
      throw config_error("n_values must be positive");
    if (synonymy == 0) throw config_error("synonymy must be at least 1");
    if (polysemy_rate < 0 || polysemy_rate >= 1)
      throw config_error("polysemy_rate must be in [0, 1)");
    if (noise_rate < 0 || noise_rate >= 1)
      throw config_error("noise_rate must be in [0, 1)");
    if (form_lengths.empty()) throw config_error("form_lengths must be non-empty");
    for (auto len : form_lengths)
      if (len == 0) throw config_error("form lengths must be positive");
    if (dataset_size == 0) throw config_error("dataset_size must be positive");
    if (non_compositional && (synonymy > 1 || polysemy_rate > 0))
      throw config_error(
          "non_compositional excludes synonymy > 1 and polysemy_rate > 0");
    if (multi_token() && vocab_size == 0)
      throw config_error("vocab_size must be positive for multi-token forms");
  }
};

/// Atomic meaning ids: attribute-value pairs (a * n_values + v) or, in sparse
/// mode, the attribute index itself.
using AtomId = std::uint32_t;

/// A lexicon unit is the smallest meaning bundle that receives forms: one
/// atom, or a merged group under non-compositional mapping.
struct LexiconUnit {
  std::vector<AtomId> atoms;                       // ascending
  std::vector<std::vector<std::uint32_t>> forms;   // one per synonym slot
};

struct Lexicon {
  std::vector<LexiconUnit> units;
  std::map<std::vector<AtomId>, std::uint32_t> unit_index;
  std::vector<std::vector<std::uint32_t>> attr_groups;  // attribute partition
  std::uint32_t form_token_count = 0;   // form tokens occupy [0, count)
  std::uint32_t noise_token_base = 0;   // noise tokens occupy [base, base+n)
  std::uint32_t noise_token_count = 0;
};

struct GroundTruthPair {
  std::vector<std::uint32_t> form;  // generator form-token ids
  std::vector<AtomId> meaning;
};

struct Generated {
  Corpus corpus;
  Inventory ground_truth;
  std::vector<std::string> noise_surfaces;
};

namespace procdetail {

inline std::string atom_surface(const ProcGenConfig& cfg, AtomId atom) {
  if (cfg.sparse_meanings) return "m" + std::to_string(atom);
  return "a" + std::to_string(atom / cfg.n_values) + "_v" +
         std::to_string(atom % cfg.n_values);
}

inline std::string form_token_surface(std::uint32_t token) {
  return std::to_string(token);
}

}  // namespace procdetail

/// Samples one complete meaning. Attribute-value mode draws one value per
/// attribute (ramp-weighted under imbalance); sparse mode includes each
/// binary attribute independently and resamples empty draws.
inline std::vector<AtomId> sample_meaning(const ProcGenConfig& cfg, Rng& rng) {
  std::vector<AtomId> atoms;
  if (cfg.sparse_meanings) {
    // imbalance ramps the two binary values: P(true) = 2/3
    const double p_true = cfg.imbalance ? 2.0 / 3.0 : 0.5;
    do {
      atoms.clear();
      for (std::uint32_t a = 0; a < cfg.n_attributes; ++a)
        if (rng.bernoulli(p_true)) atoms.push_back(a);
    } while (atoms.empty());
    return atoms;
  }
  for (std::uint32_t a = 0; a < cfg.n_attributes; ++a) {
    std::uint32_t v;
    if (cfg.imbalance) {
      // P(v) proportional to v+1
      const std::uint64_t total =
          static_cast<std::uint64_t>(cfg.n_values) * (cfg.n_values + 1) / 2;
      std::uint64_t u = rng.below(total);
      v = 0;
      std::uint64_t acc = 1;
      while (u >= acc) {
        u -= acc;
        ++v;
        ++acc;
      }
    } else {
      v = static_cast<std::uint32_t>(rng.index(cfg.n_values));
    }
    atoms.push_back(a * cfg.n_values + v);
  }
  return atoms;
}

/// Builds the meaning-to-forms mapping. Each unit receives `synonymy` forms;
/// with probability polysemy_rate a unit reuses an already assigned form.
/// Non-compositional mode merges randomly paired attributes into units.
inline Lexicon build_lexicon(const ProcGenConfig& cfg, Rng& rng) {
  cfg.validate();
  Lexicon lex;

  // partition attributes (identity, or random pairs when non-compositional)
  std::vector<std::uint32_t> attrs(cfg.n_attributes);
  for (std::uint32_t a = 0; a < cfg.n_attributes; ++a) attrs[a] = a;
  if (cfg.non_compositional) {
    rng.shuffle(attrs);
    std::vector<std::vector<std::uint32_t>> groups;
    for (std::size_t i = 0; i + 1 < attrs.size(); i += 2) {
      std::vector<std::uint32_t> g = {attrs[i], attrs[i + 1]};
      std::sort(g.begin(), g.end());
      groups.push_back(std::move(g));
    }
    if (attrs.size() % 2 == 1) groups.push_back({attrs.back()});
    std::sort(groups.begin(), groups.end());
    lex.attr_groups = std::move(groups);
  } else {
    for (std::uint32_t a = 0; a < cfg.n_attributes; ++a) lex.attr_groups.push_back({a});
  }

  // enumerate units: every realizable atom combination per attribute group
  auto add_unit = [&](std::vector<AtomId> atoms) {
    std::sort(atoms.begin(), atoms.end());
    lex.unit_index.emplace(atoms, static_cast<std::uint32_t>(lex.units.size()));
    lex.units.push_back({std::move(atoms), {}});
  };
  for (const auto& group : lex.attr_groups) {
    if (cfg.sparse_meanings) {
      // sparse attributes may appear alone or, in a pair group, together
      for (std::uint32_t a : group) add_unit({a});
      if (group.size() == 2) add_unit({group[0], group[1]});
    } else if (group.size() == 1) {
      for (std::uint32_t v = 0; v < cfg.n_values; ++v)
        add_unit({group[0] * cfg.n_values + v});
    } else {
      for (std::uint32_t v0 = 0; v0 < cfg.n_values; ++v0)
        for (std::uint32_t v1 = 0; v1 < cfg.n_values; ++v1)
          add_unit({group[0] * cfg.n_values + v0, group[1] * cfg.n_values + v1});
    }
  }

  // assign forms
  const bool multi = cfg.multi_token();
  std::set<std::vector<std::uint32_t>> used;
  std::vector<std::vector<std::uint32_t>> pool;  // for polysemous reuse
  std::uint32_t next_token = 0;
  std::uint64_t capacity = 0;
  if (multi) {
    for (auto len : cfg.form_lengths) {
      std::uint64_t c = 1;
      for (std::uint32_t i = 0; i < len && c < (1ull << 40); ++i) c *= cfg.vocab_size;
      capacity += c;
    }
  }
  auto fresh_form = [&]() {
    if (!multi) {
      std::vector<std::uint32_t> f = {next_token++};
      return f;
    }
    if (used.size() >= capacity)
      throw config_error("lexicon capacity exhausted: vocab too small");
    for (int tries = 0; tries < 100000; ++tries) {
      const std::uint32_t len =
          cfg.form_lengths[rng.index(cfg.form_lengths.size())];
      std::vector<std::uint32_t> f(len);
      for (auto& t : f) t = static_cast<std::uint32_t>(rng.index(cfg.vocab_size));
      if (!used.count(f)) return f;
    }
    throw config_error("lexicon capacity exhausted: could not draw a fresh form");
  };

  for (auto& unit : lex.units) {
    const bool reuse = rng.bernoulli(cfg.polysemy_rate) && !pool.empty();
    for (std::uint32_t s = 0; s < cfg.synonymy; ++s) {
      if (reuse && s == 0) {
        unit.forms.push_back(pool[rng.index(pool.size())]);
        continue;
      }
      auto f = fresh_form();
      used.insert(f);
      unit.forms.push_back(f);
      pool.push_back(std::move(f));
    }
  }
  lex.form_token_count = multi ? cfg.vocab_size : next_token;
  lex.noise_token_base = lex.form_token_count;
  lex.noise_token_count = std::max<std::uint32_t>(lex.form_token_count, 1);
  return lex;
}

namespace procdetail {

/// Splits a sampled meaning into lexicon units under the attribute partition.
inline std::vector<std::uint32_t> decompose(const ProcGenConfig& cfg,
                                            const Lexicon& lex,
                                            const std::vector<AtomId>& atoms) {
  std::vector<std::uint32_t> units;
  for (const auto& group : lex.attr_groups) {
    std::vector<AtomId> present;
    for (AtomId atom : atoms) {
      const std::uint32_t attr = cfg.sparse_meanings ? atom : atom / cfg.n_values;
      if (std::find(group.begin(), group.end(), attr) != group.end())
        present.push_back(atom);
    }
    if (present.empty()) continue;
    std::sort(present.begin(), present.end());
    if (auto it = lex.unit_index.find(present); it != lex.unit_index.end()) {
      units.push_back(it->second);
      continue;
    }
    // a pair group where only parts match holistic units: fall back to atoms
    for (AtomId atom : present) {
      auto single = lex.unit_index.find({atom});
      if (single == lex.unit_index.end())
        throw config_error("meaning atom has no lexicon unit");
      units.push_back(single->second);
    }
  }
  return units;
}

}  // namespace procdetail

/// Generates a corpus with its ground truth. Utterances concatenate one form
/// per meaning unit in attribute order; shuffling permutes form order only,
/// and noise inserts geometric bursts of reserved tokens at each gap.
inline Generated generate_dataset(const ProcGenConfig& cfg) {
  cfg.validate();
  Rng meaning_rng = Rng::stream(cfg.seed, "procgen/meaning");
  Rng lexicon_rng = Rng::stream(cfg.seed, "procgen/lexicon");
  Rng synonym_rng = Rng::stream(cfg.seed, "procgen/synonym");
  Rng shuffle_rng = Rng::stream(cfg.seed, "procgen/shuffle");
  Rng noise_rng = Rng::stream(cfg.seed, "procgen/noise");

  const Lexicon lex = build_lexicon(cfg, lexicon_rng);
  Generated out;
  std::set<std::pair<std::vector<std::uint32_t>, std::vector<AtomId>>> truth_seen;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<AtomId>>> truth;

  for (std::uint32_t r = 0; r < cfg.dataset_size; ++r) {
    const std::vector<AtomId> atoms = sample_meaning(cfg, meaning_rng);
    const std::vector<std::uint32_t> units = procdetail::decompose(cfg, lex, atoms);
    std::vector<const std::vector<std::uint32_t>*> forms;
    for (auto u : units) {
      const auto& unit = lex.units[u];
      const auto& form = unit.forms.size() == 1
                             ? unit.forms[0]
                             : unit.forms[synonym_rng.index(unit.forms.size())];
      forms.push_back(&form);
      if (truth_seen.emplace(form, unit.atoms).second)
        truth.emplace_back(form, unit.atoms);
    }
    std::vector<std::uint32_t> order(forms.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    if (cfg.shuffle) shuffle_rng.shuffle(order);

    std::vector<std::uint32_t> utterance;
    auto add_noise = [&]() {
      if (cfg.noise_rate <= 0) return;
      const std::uint64_t burst = noise_rng.geometric(1.0 - cfg.noise_rate);
      for (std::uint64_t i = 0; i < burst; ++i)
        utterance.push_back(lex.noise_token_base +
                            static_cast<std::uint32_t>(
                                noise_rng.index(lex.noise_token_count)));
    };
    for (auto i : order) {
      add_noise();
      utterance.insert(utterance.end(), forms[i]->begin(), forms[i]->end());
    }
    add_noise();

    Record rec;
    for (auto t : utterance)
      rec.form.push_back(out.corpus.form_vocab.intern(
          procdetail::form_token_surface(t)));
    for (AtomId atom : atoms)
      rec.meaning.push_back(
          out.corpus.meaning_vocab.intern(procdetail::atom_surface(cfg, atom)));
    detail::sort_unique(rec.meaning);
    out.corpus.records.push_back(std::move(rec));
  }

  for (const auto& [form, atoms] : truth) {
    Morpheme m;
    for (auto t : form)
      m.form.push_back(out.ground_truth.form_vocab.intern(
          procdetail::form_token_surface(t)));
    for (AtomId atom : atoms)
      m.meaning.push_back(out.ground_truth.meaning_vocab.intern(
          procdetail::atom_surface(cfg, atom)));
    m.order = static_cast<std::uint32_t>(out.ground_truth.morphemes.size());
    out.ground_truth.morphemes.push_back(std::move(m));
  }
  for (std::uint32_t i = 0; i < lex.noise_token_count; ++i)
    out.noise_surfaces.push_back(
        procdetail::form_token_surface(lex.noise_token_base + i));
  return out;
}

/// One grid cell: a config template (seed left open) plus its settings map.
struct GridCell {
  ProcGenConfig config;
  std::vector<std::pair<std::string, std::string>> settings;
};

/// The benchmark grid: the Cartesian product of two values per variation,
/// with vocab size collapsed for single-token cells and the non-compositional
/// exclusions applied. "smoke" is the single all-inactive cell.
inline std::vector<GridCell> expand_grid(const std::string& name) {
  auto make_cell = [](std::uint32_t synonymy, double polysemy, bool multi,
                      std::uint32_t vocab, bool sparse, bool imbalance,
                      std::uint32_t size, double noise, bool shuffle,
                      bool noncomp) {
    GridCell cell;
    ProcGenConfig& c = cell.config;
    c.synonymy = synonymy;
    c.polysemy_rate = polysemy;
    c.form_lengths = multi ? std::vector<std::uint32_t>{1, 2, 3, 4}
                           : std::vector<std::uint32_t>{1};
    c.vocab_size = multi ? vocab : 0;
    c.sparse_meanings = sparse;
    c.n_attributes = sparse ? 8 : 4;
    c.n_values = sparse ? 2 : 4;
    c.imbalance = imbalance;
    c.dataset_size = size;
    c.noise_rate = noise;
    c.shuffle = shuffle;
    c.non_compositional = noncomp;
    if (!multi) c.vocab_size = 1;  // unused; kept valid
    auto str = [](auto v) { return std::to_string(v); };
    cell.settings = {
        {"synonymy", str(synonymy)},
        {"polysemy", polysemy > 0 ? "0.15" : "0"},
        {"multi_token", multi ? "true" : "false"},
        {"vocab_size", multi ? str(vocab) : "na"},
        {"sparse", sparse ? "true" : "false"},
        {"imbalance", imbalance ? "true" : "false"},
        {"dataset_size", str(size)},
        {"noise", noise > 0 ? "0.5" : "0"},
        {"shuffle", shuffle ? "true" : "false"},
        {"non_compositional", noncomp ? "true" : "false"},
    };
    return cell;
  };

  std::vector<GridCell> cells;
  if (name == "smoke") {
    cells.push_back(make_cell(1, 0.0, false, 0, false, false, 500, 0.0, false, false));
    return cells;
  }
  if (name != "default") throw config_error("unknown grid: " + name);
  for (std::uint32_t synonymy : {1u, 3u})
    for (double polysemy : {0.0, 0.15})
      for (bool multi : {false, true})
        for (std::uint32_t vocab : multi ? std::vector<std::uint32_t>{10, 50}
                                         : std::vector<std::uint32_t>{0})
          for (bool sparse : {false, true})
            for (bool imbalance : {false, true})
              for (std::uint32_t size : {500u, 50u})
                for (double noise : {0.0, 0.5})
                  for (bool shuffle : {false, true})
                    for (bool noncomp : {false, true}) {
                      if (noncomp && (synonymy > 1 || polysemy > 0)) continue;
                      cells.push_back(make_cell(synonymy, polysemy, multi, vocab,
                                                sparse, imbalance, size, noise,
                                                shuffle, noncomp));
                    }
  return cells;
}

}  // namespace csar
