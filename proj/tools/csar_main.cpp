// csar: morpheme induction over parallel form-meaning corpora, with a
// procedural dataset generator, evaluation against ground truth, baselines
// and inventory analytics.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csar/csar.hpp"

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string csv_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct InductionFlags {
  std::string weighting = "mi";
  std::int64_t max_records = -1;
  std::int64_t max_inventory_size = -1;
  std::int64_t max_form_size = -1;
  std::int64_t max_meaning_size = -1;
  std::int64_t form_vocab_size = -1;
  std::int64_t meaning_vocab_size = -1;
  std::int64_t token_vocab_size = -1;
  std::int64_t cooccurrence_threshold = 0;
  bool no_search_best_form = false;
  bool ngram_semantics = false;
  double time_limit = 0.0;
  std::uint64_t seed = 0;

  csar::InductionConfig to_config() const {
    csar::InductionConfig cfg;
    auto w = csar::parse_weighting(weighting);
    if (!w) throw csar::config_error("unknown weighting: " + weighting);
    cfg.weighting = *w;
    auto opt = [](std::int64_t v) -> std::optional<std::size_t> {
      if (v < 0) return std::nullopt;
      return static_cast<std::size_t>(v);
    };
    cfg.max_records = opt(max_records);
    cfg.max_inventory_size = opt(max_inventory_size);
    cfg.max_form_size = opt(max_form_size);
    cfg.max_meaning_size = opt(max_meaning_size);
    cfg.form_vocab_size = opt(form_vocab_size);
    cfg.meaning_vocab_size = opt(meaning_vocab_size);
    cfg.token_vocab_size = opt(token_vocab_size);
    cfg.cooccurrence_threshold = static_cast<std::uint32_t>(cooccurrence_threshold);
    cfg.search_best_form = !no_search_best_form;
    cfg.ngram_semantics = ngram_semantics;
    if (time_limit > 0) cfg.time_limit_seconds = time_limit;
    cfg.seed = seed;
    return cfg;
  }

  std::vector<std::pair<std::string, std::string>> settings() const {
    return {
        {"weighting", weighting},
        {"max_records", std::to_string(max_records)},
        {"max_inventory_size", std::to_string(max_inventory_size)},
        {"max_form_size", std::to_string(max_form_size)},
        {"max_meaning_size", std::to_string(max_meaning_size)},
        {"form_vocab_size", std::to_string(form_vocab_size)},
        {"meaning_vocab_size", std::to_string(meaning_vocab_size)},
        {"token_vocab_size", std::to_string(token_vocab_size)},
        {"cooccurrence_threshold", std::to_string(cooccurrence_threshold)},
        {"search_best_form", no_search_best_form ? "false" : "true"},
        {"ngram_semantics", ngram_semantics ? "true" : "false"},
        {"time_limit", num(time_limit)},
        {"seed", std::to_string(seed)},
    };
  }
};

void add_induction_flags(CLI::App* cmd, InductionFlags& f) {
  cmd->add_option("--weighting", f.weighting,
                  "pair weighting: mi (default), joint, pmi, npmi");
  cmd->add_option("--max-records", f.max_records,
                  "only consider this many input records (20000 for the "
                  "paper-scale human corpora)");
  cmd->add_option("--max-inventory-size", f.max_inventory_size,
                  "stop after this many morphemes (300 for image captions and "
                  "machine translation)");
  cmd->add_option("--max-form-size", f.max_form_size,
                  "max form candidate tokens (3 for machine translation and "
                  "image captions)");
  cmd->add_option("--max-meaning-size", f.max_meaning_size,
                  "max meaning candidate tokens (3 for machine translation, 2 "
                  "for image captions)");
  cmd->add_option("--form-vocab-size", f.form_vocab_size,
                  "keep only the most common form candidates (100000 for "
                  "human-language corpora)");
  cmd->add_option("--meaning-vocab-size", f.meaning_vocab_size,
                  "keep only the most common meaning candidates (100000 for "
                  "human-language corpora)");
  cmd->add_option("--token-vocab-size", f.token_vocab_size,
                  "keep only the most common tokens (1000 for image captions, "
                  "500 for machine translation)");
  cmd->add_option("--cooccurrence-threshold", f.cooccurrence_threshold,
                  "zero out co-occurrence counts below this (1 for ShapeWorld, "
                  "10 for image captions, 100 for machine translation)");
  cmd->add_flag("--no-search-best-form", f.no_search_best_form,
                "resolve ambiguous applications quasirandomly instead of "
                "searching for the weakest competitor");
  cmd->add_flag("--ngram-semantics", f.ngram_semantics,
                "treat meanings as ordered and generate meaning candidates as "
                "n-grams (machine translation)");
  cmd->add_option("--time-limit", f.time_limit, "induction time limit in seconds");
  cmd->add_option("--seed", f.seed, "seed for all randomized choices");
}

struct GenFlags {
  std::uint32_t n_attributes = 4;
  std::uint32_t n_values = 4;
  bool sparse = false;
  std::uint32_t synonymy = 1;
  double polysemy = 0.0;
  std::vector<std::uint32_t> form_lengths = {1};
  std::uint32_t vocab_size = 10;
  bool imbalance = false;
  std::uint32_t dataset_size = 500;
  double noise = 0.0;
  bool shuffle = false;
  bool non_compositional = false;

  csar::ProcGenConfig to_config() const {
    csar::ProcGenConfig cfg;
    cfg.n_attributes = n_attributes;
    cfg.n_values = n_values;
    cfg.sparse_meanings = sparse;
    cfg.synonymy = synonymy;
    cfg.polysemy_rate = polysemy;
    cfg.form_lengths = form_lengths;
    cfg.vocab_size = vocab_size;
    cfg.imbalance = imbalance;
    cfg.dataset_size = dataset_size;
    cfg.noise_rate = noise;
    cfg.shuffle = shuffle;
    cfg.non_compositional = non_compositional;
    return cfg;
  }

  std::vector<std::pair<std::string, std::string>> settings() const {
    std::string lengths;
    for (auto l : form_lengths) lengths += (lengths.empty() ? "" : ",") + std::to_string(l);
    return {
        {"n_attributes", std::to_string(n_attributes)},
        {"n_values", std::to_string(n_values)},
        {"sparse", sparse ? "true" : "false"},
        {"synonymy", std::to_string(synonymy)},
        {"polysemy", num(polysemy)},
        {"form_lengths", lengths},
        {"vocab_size", std::to_string(vocab_size)},
        {"imbalance", imbalance ? "true" : "false"},
        {"dataset_size", std::to_string(dataset_size)},
        {"noise", num(noise)},
        {"shuffle", shuffle ? "true" : "false"},
        {"non_compositional", non_compositional ? "true" : "false"},
    };
  }
};

void add_gen_flags(CLI::App* cmd, GenFlags& f) {
  cmd->add_option("--n-attributes", f.n_attributes, "meaning attributes");
  cmd->add_option("--n-values", f.n_values, "values per attribute");
  cmd->add_flag("--sparse", f.sparse, "independent binary attributes");
  cmd->add_option("--synonymy", f.synonymy, "forms per meaning");
  cmd->add_option("--polysemy", f.polysemy, "chance a meaning reuses a form");
  cmd->add_option("--form-lengths", f.form_lengths,
                  "permitted tokens per form (e.g. --form-lengths 1 2 3 4)");
  cmd->add_option("--vocab-size", f.vocab_size,
                  "token vocabulary for multi-token forms");
  cmd->add_flag("--imbalance", f.imbalance, "value probability ~ index+1");
  cmd->add_option("--dataset-size", f.dataset_size, "records to generate");
  cmd->add_option("--noise", f.noise, "noise rate (1-p of the geometric count)");
  cmd->add_flag("--shuffle", f.shuffle, "shuffle form order per record");
  cmd->add_flag("--non-compositional", f.non_compositional,
                "merge random attribute pairs into holistic units");
}

nlohmann::ordered_json scores_json(const csar::Scores& s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

constexpr const char* kResultsHeader =
    "# csar-results v1\n"
    "fingerprint,seed,method,mode,precision,recall,f1,n_induced,n_truth,seconds\n";

void write_results_csv(const std::string& path,
                       const std::vector<csar::BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw csar::io_error("cannot write: " + path);
  out << kResultsHeader;
  for (const auto& r : rows) {
    out << r.fingerprint << ',' << r.seed << ',' << r.method << ',' << r.mode
        << ',' << num(r.precision) << ',' << num(r.recall) << ',' << num(r.f1)
        << ',' << r.n_induced << ',' << r.n_truth << ',' << csv_fixed(r.seconds)
        << '\n';
  }
}

int run_induce(const std::string& corpus_path, const std::string& out_path,
               std::string manifest_path, const InductionFlags& flags,
               bool progress) {
  csar::RunManifest manifest;
  manifest.command = "induce";
  manifest.settings = flags.settings();
  manifest.fingerprint = csar::fingerprint(manifest.settings);
  manifest.seeds = {flags.seed};
  manifest.inputs = {{"corpus", corpus_path}};
  manifest.outputs = {{"inventory", out_path}};
  if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    csar::Corpus corpus = csar::load_corpus(corpus_path);
    csar::ProgressFn on_progress;
    if (progress) {
      on_progress = [&corpus](const csar::ProgressEvent& ev) {
        nlohmann::ordered_json j;
        j["iteration"] = ev.iteration;
        j["form"] = nlohmann::json::array();
        for (auto t : ev.morpheme->form)
          j["form"].push_back(corpus.form_vocab.token(t));
        j["meaning"] = nlohmann::json::array();
        for (auto t : ev.morpheme->meaning)
          j["meaning"].push_back(corpus.meaning_vocab.token(t));
        j["weight"] = ev.morpheme->weight;
        j["ablated_records"] = ev.ablated_records;
        std::cerr << j.dump() << '\n';
      };
    }
    csar::Inventory inv = csar::induce(corpus, flags.to_config(), on_progress);
    csar::save_inventory(inv, out_path);
    manifest.outputs.emplace_back("morphemes", std::to_string(inv.morphemes.size()));
  } catch (const std::exception& e) {
    manifest.status = "failed";
    manifest.error = e.what();
    std::cerr << "error: " << e.what() << '\n';
    rc = 1;
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  manifest.duration_seconds = dt.count();
  manifest.write(manifest_path);
  return rc;
}

int run_generate(const std::string& out_dir, const std::string& grid,
                 const GenFlags& flags, std::size_t seeds, std::uint64_t base_seed) {
  csar::RunManifest manifest;
  manifest.command = "generate";
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
  try {
    fs::create_directories(out_dir);
    std::vector<csar::GridCell> cells;
    if (grid.empty()) {
      csar::GridCell cell;
      cell.config = flags.to_config();
      cell.settings = flags.settings();
      cells.push_back(std::move(cell));
    } else {
      cells = csar::expand_grid(grid);
    }
    for (std::size_t s = 0; s < seeds; ++s) manifest.seeds.push_back(base_seed + s);
    for (const auto& cell : cells) {
      const std::string fp = csar::fingerprint(cell.settings);
      nlohmann::ordered_json cj;
      cj["fingerprint"] = fp;
      for (const auto& [k, v] : cell.settings) cj["settings"][k] = v;
      cj["seeds"] = nlohmann::json::array();
      for (std::size_t s = 0; s < seeds; ++s) {
        const std::uint64_t seed = base_seed + s;
        csar::ProcGenConfig cfg = cell.config;
        cfg.seed = seed;
        const csar::Generated gen = csar::generate_dataset(cfg);
        const fs::path dir = fs::path(out_dir) / fp / ("seed" + std::to_string(seed));
        fs::create_directories(dir);
        csar::save_corpus(gen.corpus, (dir / "corpus.jsonl").string());
        csar::save_pairs(gen.ground_truth, (dir / "truth.jsonl").string());
        cj["seeds"].push_back(seed);
      }
      cells_json.push_back(std::move(cj));
    }
    manifest.fingerprint = csar::fingerprint({{"grid", grid.empty() ? "single" : grid},
                                              {"seeds", std::to_string(seeds)},
                                              {"seed", std::to_string(base_seed)}});
    manifest.outputs = {{"dir", out_dir}};
  } catch (const std::exception& e) {
    manifest.status = "failed";
    manifest.error = e.what();
    std::cerr << "error: " << e.what() << '\n';
    rc = 1;
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  manifest.duration_seconds = dt.count();
  nlohmann::ordered_json mj = manifest.to_json();
  mj["cells"] = cells_json;
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  if (out) out << mj.dump(2) << '\n';
  return rc;
}

int run_evaluate(const std::string& inventory_path, const std::string& truth_path,
                 bool noise, const std::string& csv_path) {
  csar::Inventory induced = csar::load_inventory(inventory_path);
  csar::Inventory truth = csar::load_inventory(truth_path);
  csar::EvalReport rep = csar::evaluate(induced, truth, noise);
  nlohmann::ordered_json j;
  j["exact_full"] = scores_json(rep.exact_full);
  j["fuzzy_full"] = scores_json(rep.fuzzy_full);
  j["exact_form"] = scores_json(rep.exact_form);
  j["fuzzy_form"] = scores_json(rep.fuzzy_form);
  j["n_induced"] = rep.n_induced;
  j["n_truth"] = rep.n_truth;
  j["form_only_noise_flagged"] = rep.form_only_noise_flagged;
  std::cout << j.dump(2) << '\n';
  if (!csv_path.empty()) {
    std::vector<csar::BenchRow> rows;
    for (const char* mode : csar::kBenchModes) {
      csar::BenchRow row;
      row.fingerprint = "-";
      row.method = "inventory";
      row.mode = mode;
      const csar::Scores& s = csar::benchdetail::mode_scores(rep, mode);
      row.precision = s.precision;
      row.recall = s.recall;
      row.f1 = s.f1;
      row.n_induced = rep.n_induced;
      row.n_truth = rep.n_truth;
      rows.push_back(row);
    }
    write_results_csv(csv_path, rows);
  }
  return 0;
}

int run_analyze(const std::string& inventory_path, const std::string& corpus_path,
                std::size_t sample_size, std::uint64_t seed,
                const std::string& csv_path) {
  csar::Inventory inv = csar::load_inventory(inventory_path);
  csar::InventoryMetrics m = csar::inventory_metrics(inv);
  csar::ToposimResult topo;
  if (!corpus_path.empty()) {
    csar::Corpus corpus = csar::load_corpus(corpus_path);
    topo = csar::toposim(corpus, sample_size, seed);
  }
  nlohmann::ordered_json j;
  j["inventory_size"] = m.inventory_size;
  j["inventory_entropy"] = m.inventory_entropy;
  j["entropy_defined"] = m.entropy_defined;
  j["form_size"] = m.mean_form_size;
  j["meaning_size"] = m.mean_meaning_size;
  j["synonymy"] = m.synonymy;
  j["polysemy"] = m.polysemy;
  if (!corpus_path.empty()) {
    j["toposim"] = topo.rho;
    j["toposim_defined"] = topo.defined;
    j["toposim_pairs"] = topo.pairs;
  }
  std::cout << j.dump(2) << '\n';
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw csar::io_error("cannot write: " + csv_path);
    out << "# csar-analytics v1\n"
        << "# synonymy: prevalence-weighted mean over meanings of the entropy "
           "of the prevalence-conditioned form distribution; polysemy is the "
           "transpose; sizes and inventory entropy are prevalence-weighted\n"
        << "# toposim: Spearman rho between normalized insertion-deletion "
           "utterance distance and Jaccard meaning distance over sampled "
           "record pairs\n"
        << "inventory_size,inventory_entropy,form_size,meaning_size,synonymy,"
           "polysemy,toposim\n"
        << m.inventory_size << ',' << num(m.inventory_entropy) << ','
        << num(m.mean_form_size) << ',' << num(m.mean_meaning_size) << ','
        << num(m.synonymy) << ',' << num(m.polysemy) << ',' << num(topo.rho)
        << '\n';
  }
  return 0;
}

int run_bench_cmd(const csar::BenchOptions& options, const std::string& out_dir) {
  csar::RunManifest manifest;
  manifest.command = "bench";
  manifest.settings = {{"grid", options.grid},
                       {"seeds", std::to_string(options.seeds)},
                       {"seed", std::to_string(options.base_seed)}};
  manifest.fingerprint = csar::fingerprint(manifest.settings);
  for (std::size_t s = 0; s < options.seeds; ++s)
    manifest.seeds.push_back(options.base_seed + s);
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    fs::create_directories(out_dir);
    csar::BenchResults results = csar::run_bench(options);

    write_results_csv((fs::path(out_dir) / "results.csv").string(), results.rows);

    {
      std::ofstream out(fs::path(out_dir) / "cells.csv");
      if (!out) throw csar::io_error("cannot write cells.csv");
      out << "# csar-cells v1\nfingerprint";
      if (!results.cells.empty())
        for (const auto& [k, v] : results.cells[0].settings) out << ',' << k;
      out << '\n';
      for (std::size_t c = 0; c < results.cells.size(); ++c) {
        out << results.cell_fingerprints[c];
        for (const auto& [k, v] : results.cells[c].settings) out << ',' << v;
        out << '\n';
      }
    }

    nlohmann::ordered_json sj;
    for (const auto& [key, entry] : results.summary) {
      nlohmann::ordered_json e;
      e["precision"] = entry.precision;
      e["recall"] = entry.recall;
      e["f1"] = entry.f1;
      e["cells"] = entry.cells;
      sj[key.first][key.second] = e;
    }
    sj["wall_seconds"] = results.wall_seconds;
    sj["failures"] = nlohmann::json::array();
    for (const auto& f : results.failures) {
      nlohmann::ordered_json e;
      e["fingerprint"] = f.fingerprint;
      e["seed"] = f.seed;
      e["error"] = f.error;
      sj["failures"].push_back(e);
    }
    {
      std::ofstream out(fs::path(out_dir) / "summary.json");
      out << sj.dump(2) << '\n';
    }

    std::printf("%-8s %-11s %9s %9s %9s %6s\n", "method", "mode", "precision",
                "recall", "f1", "cells");
    for (const auto& [key, entry] : results.summary) {
      std::printf("%-8s %-11s %9.3f %9.3f %9.3f %6zu\n", key.first.c_str(),
                  key.second.c_str(), entry.precision, entry.recall, entry.f1,
                  entry.cells);
    }
    std::printf("cells=%zu rows=%zu failures=%zu wall=%.1fs\n",
                results.cells.size(), results.rows.size(),
                results.failures.size(), results.wall_seconds);
    if (!results.failures.empty()) rc = 1;
  } catch (const std::exception& e) {
    manifest.status = "failed";
    manifest.error = e.what();
    std::cerr << "error: " << e.what() << '\n';
    rc = 1;
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  manifest.duration_seconds = dt.count();
  manifest.outputs = {{"dir", out_dir}};
  manifest.write((fs::path(out_dir) / "manifest.json").string());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csar: morpheme induction for parallel form-meaning corpora"};
  app.require_subcommand(1);

  // induce
  auto* induce_cmd = app.add_subcommand("induce", "induce a morpheme inventory");
  std::string corpus_path, out_path, manifest_path;
  bool progress = false;
  InductionFlags iflags;
  induce_cmd->add_option("--corpus", corpus_path, "input corpus (jsonl)")->required();
  induce_cmd->add_option("--out", out_path, "output inventory (jsonl)")->required();
  induce_cmd->add_option("--manifest", manifest_path,
                         "manifest path (default: <out>.manifest.json)");
  induce_cmd->add_flag("--progress", progress,
                       "emit one JSON progress line per selection on stderr");
  add_induction_flags(induce_cmd, iflags);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "generate procedural datasets");
  std::string gen_out, gen_grid;
  GenFlags gflags;
  std::size_t gen_seeds = 3;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--out", gen_out, "output directory")->required();
  gen_cmd->add_option("--grid", gen_grid,
                      "generate a whole grid (default|smoke) instead of one cell");
  gen_cmd->add_option("--seeds", gen_seeds, "seeds per cell");
  gen_cmd->add_option("--seed", gen_seed, "base seed");
  add_gen_flags(gen_cmd, gflags);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score an inventory against truth");
  std::string eval_inventory, eval_truth, eval_csv;
  bool eval_noise = false;
  eval_cmd->add_option("--inventory", eval_inventory, "induced inventory (jsonl)")
      ->required();
  eval_cmd->add_option("--truth", eval_truth, "ground-truth pairs (jsonl)")
      ->required();
  eval_cmd->add_flag("--noise", eval_noise,
                     "flag the corpus as noise-bearing (form-only scores are "
                     "excluded from aggregates)");
  eval_cmd->add_option("--csv", eval_csv, "also write rows to this CSV");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "inventory and corpus analytics");
  std::string an_inventory, an_corpus, an_csv;
  std::size_t an_sample = 50000;
  std::uint64_t an_seed = 0;
  an_cmd->add_option("--inventory", an_inventory, "inventory (jsonl)")->required();
  an_cmd->add_option("--corpus", an_corpus, "corpus for topographic similarity");
  an_cmd->add_option("--sample-size", an_sample, "record pairs to sample");
  an_cmd->add_option("--seed", an_seed, "sampling seed");
  an_cmd->add_option("--csv", an_csv, "also write a single-row CSV report");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "run the procedural benchmark grid");
  std::string bench_grid = "default", bench_out = "bench_out";
  std::size_t bench_seeds = 3, bench_jobs = 0;
  std::uint64_t bench_seed = 0;
  std::vector<std::string> bench_only, bench_filters;
  bench_cmd->add_option("--grid", bench_grid, "grid name (default|smoke)");
  bench_cmd->add_option("--out", bench_out, "output directory");
  bench_cmd->add_option("--seeds", bench_seeds, "seeds per cell");
  bench_cmd->add_option("--seed", bench_seed, "base seed");
  bench_cmd->add_option("--jobs", bench_jobs, "worker threads (0 = all cores)");
  bench_cmd->add_option("--only", bench_only,
                        "methods to run (csar, record, bpe)");
  bench_cmd->add_option("--filter", bench_filters,
                        "cell filters like dataset_size=50 (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*induce_cmd)
      return run_induce(corpus_path, out_path, manifest_path, iflags, progress);
    if (*gen_cmd)
      return run_generate(gen_out, gen_grid, gflags, gen_seeds, gen_seed);
    if (*eval_cmd)
      return run_evaluate(eval_inventory, eval_truth, eval_noise, eval_csv);
    if (*an_cmd)
      return run_analyze(an_inventory, an_corpus, an_sample, an_seed, an_csv);
    if (*bench_cmd) {
      csar::BenchOptions options;
      options.grid = bench_grid;
      options.seeds = bench_seeds;
      options.base_seed = bench_seed;
      options.jobs = bench_jobs;
      if (!bench_only.empty()) options.methods = bench_only;
      for (const auto& f : bench_filters) {
        const auto eq = f.find('=');
        if (eq == std::string::npos)
          throw csar::config_error("bad --filter (expected key=value): " + f);
        options.filters.emplace_back(f.substr(0, eq), f.substr(eq + 1));
      }
      return run_bench_cmd(options, bench_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
