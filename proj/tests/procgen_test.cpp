#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "csar/evaluation.hpp"
#include "csar/induction.hpp"
#include "csar/procgen.hpp"

using namespace csar;

namespace {

ProcGenConfig base_config() {
  ProcGenConfig cfg;
  cfg.n_attributes = 4;
  cfg.n_values = 4;
  cfg.dataset_size = 500;
  return cfg;
}

}  // namespace

TEST_CASE("attribute-value meanings always carry one token per attribute") {
  ProcGenConfig cfg = base_config();
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto atoms = sample_meaning(cfg, rng);
    REQUIRE(atoms.size() == 4);
    std::set<std::uint32_t> attrs;
    for (auto a : atoms) attrs.insert(a / cfg.n_values);
    CHECK(attrs.size() == 4);
  }
}

TEST_CASE("imbalanced values follow the ramp distribution") {
  ProcGenConfig cfg = base_config();
  cfg.imbalance = true;
  Rng rng(11);
  std::vector<std::size_t> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    for (auto a : sample_meaning(cfg, rng)) ++counts[a % cfg.n_values];
  const double total = 4.0 * n;
  const double expected[] = {0.1, 0.2, 0.3, 0.4};
  for (int v = 0; v < 4; ++v)
    CHECK(std::abs(counts[v] / total - expected[v]) < 0.01);
}

TEST_CASE("sparse meaning sizes follow Binomial(8, 1/2) conditioned on >= 1") {
  ProcGenConfig cfg = base_config();
  cfg.sparse_meanings = true;
  cfg.n_attributes = 8;
  Rng rng(13);
  const int n = 100000;
  std::vector<std::size_t> counts(9, 0);
  for (int i = 0; i < n; ++i) {
    auto atoms = sample_meaning(cfg, rng);
    REQUIRE(!atoms.empty());
    ++counts[atoms.size()];
  }
  const double choose[] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  double chi2 = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double expected = n * choose[k] / 255.0;
    const double diff = counts[k] - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 24.32);  // chi-square 0.999 quantile, 7 dof
}

TEST_CASE("lexicon gives each meaning the requested number of synonyms") {
  ProcGenConfig cfg = base_config();
  cfg.synonymy = 3;
  cfg.form_lengths = {1, 2, 3, 4};
  cfg.vocab_size = 50;
  Rng rng(3);
  Lexicon lex = build_lexicon(cfg, rng);
  REQUIRE(lex.units.size() == 16);
  std::set<std::vector<std::uint32_t>> all_forms;
  for (const auto& unit : lex.units) {
    CHECK(unit.forms.size() == 3);
    for (const auto& f : unit.forms) all_forms.insert(f);
  }
  CHECK(all_forms.size() == 48);  // no polysemy: all distinct
}

TEST_CASE("single-token base case is a one-to-one lexicon") {
  ProcGenConfig cfg = base_config();
  Rng rng(5);
  Lexicon lex = build_lexicon(cfg, rng);
  REQUIRE(lex.units.size() == 16);
  std::set<std::vector<std::uint32_t>> forms;
  for (const auto& unit : lex.units) {
    REQUIRE(unit.forms.size() == 1);
    CHECK(unit.forms[0].size() == 1);
    forms.insert(unit.forms[0]);
  }
  CHECK(forms.size() == 16);
  CHECK(lex.form_token_count == 16);
}

TEST_CASE("polysemy reuses roughly the configured share of forms") {
  ProcGenConfig cfg = base_config();
  cfg.polysemy_rate = 0.15;
  double reused_total = 0.0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    Rng rng(splitmix64(t + 17));
    Lexicon lex = build_lexicon(cfg, rng);
    std::set<std::vector<std::uint32_t>> seen;
    int reused = 0;
    for (const auto& unit : lex.units) {
      bool any = false;
      for (const auto& f : unit.forms)
        if (seen.count(f)) any = true;
      if (any) ++reused;
      for (const auto& f : unit.forms) seen.insert(f);
    }
    reused_total += reused;
  }
  const double mean = reused_total / trials;  // 15 eligible units * 0.15 = 2.25
  CHECK(mean > 1.9);
  CHECK(mean < 2.6);
}

TEST_CASE("without variations every utterance concatenates its unit forms") {
  ProcGenConfig cfg = base_config();
  cfg.dataset_size = 50;
  cfg.seed = 2;
  Generated gen = generate_dataset(cfg);
  REQUIRE(gen.corpus.records.size() == 50);
  // one-to-one: unique single-token form per atomic meaning
  std::map<std::string, std::string> atom_to_form;
  for (const auto& m : gen.ground_truth.morphemes) {
    REQUIRE(m.meaning.size() == 1);
    REQUIRE(m.form.size() == 1);
    atom_to_form[gen.ground_truth.meaning_surface(m)[0]] =
        gen.ground_truth.form_surface(m)[0];
  }
  for (const auto& rec : gen.corpus.records) {
    REQUIRE(rec.form.size() == 4);
    REQUIRE(rec.meaning.size() == 4);
    std::vector<std::string> meanings;
    for (auto t : rec.meaning) meanings.push_back(gen.corpus.meaning_vocab.token(t));
    std::sort(meanings.begin(), meanings.end());  // a0_*, a1_*, a2_*, a3_*
    for (std::size_t i = 0; i < 4; ++i) {
      auto it = atom_to_form.find(meanings[i]);
      REQUIRE(it != atom_to_form.end());
      CHECK(gen.corpus.form_vocab.token(rec.form[i]) == it->second);
    }
  }
}

TEST_CASE("noise bursts average one token per insertion point at rate 0.5") {
  ProcGenConfig cfg = base_config();
  cfg.noise_rate = 0.5;
  cfg.dataset_size = 20000;
  cfg.seed = 4;
  Generated gen = generate_dataset(cfg);
  std::set<std::string> noise(gen.noise_surfaces.begin(), gen.noise_surfaces.end());
  std::size_t noise_tokens = 0;
  for (const auto& rec : gen.corpus.records)
    for (auto t : rec.form)
      if (noise.count(gen.corpus.form_vocab.token(t))) ++noise_tokens;
  const double gaps = 5.0 * cfg.dataset_size;  // before each of 4 forms + end
  CHECK(std::abs(noise_tokens / gaps - 1.0) < 0.05);
}

TEST_CASE("noise tokens never appear in ground-truth forms") {
  ProcGenConfig cfg = base_config();
  cfg.noise_rate = 0.5;
  cfg.form_lengths = {1, 2, 3, 4};
  cfg.vocab_size = 10;
  cfg.dataset_size = 200;
  cfg.seed = 6;
  Generated gen = generate_dataset(cfg);
  std::set<std::string> noise(gen.noise_surfaces.begin(), gen.noise_surfaces.end());
  for (const auto& m : gen.ground_truth.morphemes)
    for (const auto& t : gen.ground_truth.form_surface(m)) CHECK(noise.count(t) == 0);
}

TEST_CASE("shuffling permutes forms while preserving their content") {
  ProcGenConfig cfg = base_config();
  cfg.form_lengths = {1, 2, 3, 4};
  cfg.vocab_size = 50;
  cfg.dataset_size = 300;
  cfg.seed = 8;
  ProcGenConfig shuffled = cfg;
  shuffled.shuffle = true;
  Generated a = generate_dataset(cfg);
  Generated b = generate_dataset(shuffled);
  REQUIRE(a.corpus.records.size() == b.corpus.records.size());
  bool any_reordered = false;
  for (std::size_t i = 0; i < a.corpus.records.size(); ++i) {
    std::vector<std::string> ta, tb;
    for (auto t : a.corpus.records[i].form)
      ta.push_back(a.corpus.form_vocab.token(t));
    for (auto t : b.corpus.records[i].form)
      tb.push_back(b.corpus.form_vocab.token(t));
    if (ta != tb) any_reordered = true;
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    CHECK(ta == tb);  // same multiset of tokens
  }
  CHECK(any_reordered);
}

TEST_CASE("stripping noise recovers the noise-free paired stream") {
  ProcGenConfig cfg = base_config();
  cfg.form_lengths = {1, 2, 3, 4};
  cfg.vocab_size = 50;
  cfg.shuffle = true;
  cfg.dataset_size = 300;
  cfg.seed = 9;
  ProcGenConfig noisy = cfg;
  noisy.noise_rate = 0.5;
  Generated clean = generate_dataset(cfg);
  Generated with_noise = generate_dataset(noisy);
  std::set<std::string> noise(with_noise.noise_surfaces.begin(),
                              with_noise.noise_surfaces.end());
  REQUIRE(clean.corpus.records.size() == with_noise.corpus.records.size());
  for (std::size_t i = 0; i < clean.corpus.records.size(); ++i) {
    std::vector<std::string> stripped, expected;
    for (auto t : with_noise.corpus.records[i].form) {
      const std::string& s = with_noise.corpus.form_vocab.token(t);
      if (!noise.count(s)) stripped.push_back(s);
    }
    for (auto t : clean.corpus.records[i].form)
      expected.push_back(clean.corpus.form_vocab.token(t));
    CHECK(stripped == expected);
  }
}

TEST_CASE("generation is deterministic per seed") {
  ProcGenConfig cfg = base_config();
  cfg.synonymy = 3;
  cfg.polysemy_rate = 0.15;
  cfg.form_lengths = {1, 2, 3, 4};
  cfg.vocab_size = 10;
  cfg.noise_rate = 0.5;
  cfg.shuffle = true;
  cfg.sparse_meanings = true;
  cfg.n_attributes = 8;
  cfg.dataset_size = 100;
  cfg.seed = 10;
  Generated a = generate_dataset(cfg);
  Generated b = generate_dataset(cfg);
  REQUIRE(a.corpus.records.size() == b.corpus.records.size());
  for (std::size_t i = 0; i < a.corpus.records.size(); ++i) {
    CHECK(a.corpus.records[i].form == b.corpus.records[i].form);
    CHECK(a.corpus.records[i].meaning == b.corpus.records[i].meaning);
  }
  REQUIRE(a.ground_truth.morphemes.size() == b.ground_truth.morphemes.size());
  for (std::size_t i = 0; i < a.ground_truth.morphemes.size(); ++i) {
    CHECK(a.ground_truth.morphemes[i].form == b.ground_truth.morphemes[i].form);
    CHECK(a.ground_truth.morphemes[i].meaning ==
          b.ground_truth.morphemes[i].meaning);
  }
}

TEST_CASE("non-compositional mapping merges attribute pairs") {
  ProcGenConfig cfg = base_config();
  cfg.non_compositional = true;
  cfg.seed = 12;
  Rng rng = Rng::stream(cfg.seed, "procgen/lexicon");
  Lexicon lex = build_lexicon(cfg, rng);
  REQUIRE(lex.attr_groups.size() == 2);
  CHECK(lex.units.size() == 32);  // 16 value combinations per attribute pair
  for (const auto& unit : lex.units) CHECK(unit.atoms.size() == 2);

  Generated gen = generate_dataset(cfg);
  for (const auto& rec : gen.corpus.records) {
    CHECK(rec.form.size() == 2);  // two holistic single-token forms
    CHECK(rec.meaning.size() == 4);
  }
  for (const auto& m : gen.ground_truth.morphemes) CHECK(m.meaning.size() == 2);
}

TEST_CASE("sparse non-compositional units cover partial pairs") {
  ProcGenConfig cfg = base_config();
  cfg.sparse_meanings = true;
  cfg.n_attributes = 8;
  cfg.non_compositional = true;
  cfg.dataset_size = 300;
  cfg.seed = 14;
  Rng rng = Rng::stream(cfg.seed, "procgen/lexicon");
  Lexicon lex = build_lexicon(cfg, rng);
  REQUIRE(lex.attr_groups.size() == 4);
  CHECK(lex.units.size() == 12);  // {x}, {y}, {x,y} per pair
  Generated gen = generate_dataset(cfg);  // must not throw on partial pairs
  CHECK(gen.corpus.records.size() == 300);
}

TEST_CASE("config validation enforces the documented exclusions") {
  ProcGenConfig cfg = base_config();
  cfg.non_compositional = true;
  cfg.synonymy = 3;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.synonymy = 1;
  cfg.polysemy_rate = 0.15;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg.polysemy_rate = 0.0;
  CHECK_NOTHROW(cfg.validate());

  ProcGenConfig tiny = base_config();
  tiny.form_lengths = {2};
  tiny.vocab_size = 2;  // only 4 possible forms for 16 meanings
  Rng rng(1);
  CHECK_THROWS_AS(build_lexicon(tiny, rng), config_error);
}

TEST_CASE("the default grid matches the documented product") {
  auto cells = expand_grid("default");
  CHECK(cells.size() == 480);
  std::set<std::string> sizes;
  for (const auto& cell : cells) {
    cell.config.validate();
    std::map<std::string, std::string> s(cell.settings.begin(), cell.settings.end());
    sizes.insert(s.at("dataset_size"));
    if (s.at("non_compositional") == "true") {
      CHECK(s.at("synonymy") == "1");
      CHECK(s.at("polysemy") == "0");
    }
    if (s.at("multi_token") == "false") CHECK(s.at("vocab_size") == "na");
  }
  CHECK(sizes == std::set<std::string>{"50", "500"});

  auto smoke = expand_grid("smoke");
  REQUIRE(smoke.size() == 1);
  CHECK(smoke[0].config.dataset_size == 500);
  CHECK_THROWS_AS(expand_grid("bogus"), config_error);
}

TEST_CASE("a trivial language is recovered perfectly") {
  ProcGenConfig cfg = base_config();
  cfg.seed = 1;
  Generated gen = generate_dataset(cfg);
  Inventory inv = induce(gen.corpus, {});
  EvalReport rep = evaluate(inv, gen.ground_truth, false);
  CHECK(rep.exact_full.f1 == 1.0);
  CHECK(rep.exact_full.precision == 1.0);
  CHECK(rep.exact_full.recall == 1.0);
}
