#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "csar/evaluation.hpp"
#include "csar/induction.hpp"
#include "csar/manifest.hpp"
#include "csar/procgen.hpp"

namespace csar {

struct BenchOptions {
  std::string grid = "default";
  std::size_t seeds = 3;
  std::uint64_t base_seed = 0;
  std::vector<std::string> methods = {"csar", "record", "bpe"};
  std::vector<std::pair<std::string, std::string>> filters;
  std::size_t jobs = 0;  // 0: hardware concurrency
  InductionConfig induction;
};

struct BenchRow {
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::string method;
  std::string mode;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_induced = 0;
  std::size_t n_truth = 0;
  double seconds = 0.0;
};

struct BenchFailure {
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::string error;
};

struct BenchSummaryEntry {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t cells = 0;
};

struct BenchResults {
  std::vector<GridCell> cells;
  std::vector<std::string> cell_fingerprints;
  std::vector<BenchRow> rows;
  std::vector<BenchFailure> failures;
  // (method, mode) -> grand mean of per-cell means; form-only modes skip
  // noise-bearing cells
  std::map<std::pair<std::string, std::string>, BenchSummaryEntry> summary;
  double wall_seconds = 0.0;
};

inline const char* kBenchModes[] = {"exact_full", "fuzzy_full", "exact_form",
                                    "fuzzy_form"};

namespace benchdetail {

inline const Scores& mode_scores(const EvalReport& r, const std::string& mode) {
  if (mode == "exact_full") return r.exact_full;
  if (mode == "fuzzy_full") return r.fuzzy_full;
  if (mode == "exact_form") return r.exact_form;
  return r.fuzzy_form;
}

}  // namespace benchdetail

/// Expands the grid, generates each cell for each seed, runs the requested
/// methods and evaluates every mode. Cells run on a worker pool; results come
/// back in deterministic cell order.
inline BenchResults run_bench(const BenchOptions& options) {
  const auto t_start = std::chrono::steady_clock::now();
  BenchResults results;
  auto cells = expand_grid(options.grid);
  for (auto& cell : cells) {
    bool keep = true;
    for (const auto& [k, v] : options.filters) {
      bool matched = false;
      for (const auto& [ck, cv] : cell.settings)
        if (ck == k && cv == v) matched = true;
      if (!matched) keep = false;
    }
    if (keep) results.cells.push_back(std::move(cell));
  }
  for (const auto& cell : results.cells)
    results.cell_fingerprints.push_back(fingerprint(cell.settings));

  struct TaskResult {
    std::vector<BenchRow> rows;
    std::optional<BenchFailure> failure;
  };
  const std::size_t n_tasks = results.cells.size() * options.seeds;
  std::vector<TaskResult> task_results(n_tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t cell_idx = task / options.seeds;
      const std::size_t seed_idx = task % options.seeds;
      const GridCell& cell = results.cells[cell_idx];
      const std::string& fp = results.cell_fingerprints[cell_idx];
      const std::uint64_t seed = options.base_seed + seed_idx;
      TaskResult& out = task_results[task];
      try {
        ProcGenConfig cfg = cell.config;
        cfg.seed = seed;
        const Generated gen = generate_dataset(cfg);
        const bool has_noise = cfg.noise_rate > 0;
        for (const auto& method : options.methods) {
          const auto t0 = std::chrono::steady_clock::now();
          Inventory inv;
          if (method == "csar") {
            InductionConfig icfg = options.induction;
            icfg.seed = seed;
            inv = induce(gen.corpus, icfg);
          } else if (method == "record") {
            inv = record_baseline(gen.corpus);
          } else if (method == "bpe") {
            inv = bpe_baseline(gen.corpus);
          } else {
            throw config_error("unknown method: " + method);
          }
          const std::chrono::duration<double> dt =
              std::chrono::steady_clock::now() - t0;
          const EvalReport rep = evaluate(inv, gen.ground_truth, has_noise);
          for (const char* mode : kBenchModes) {
            const Scores& s = benchdetail::mode_scores(rep, mode);
            BenchRow row;
            row.fingerprint = fp;
            row.seed = seed;
            row.method = method;
            row.mode = mode;
            row.precision = s.precision;
            row.recall = s.recall;
            row.f1 = s.f1;
            row.n_induced = rep.n_induced;
            row.n_truth = rep.n_truth;
            row.seconds = dt.count();
            out.rows.push_back(std::move(row));
          }
        }
      } catch (const std::exception& e) {
        out.failure = BenchFailure{fp, seed, e.what()};
      }
    }
  };

  std::size_t jobs = options.jobs ? options.jobs
                                  : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(n_tasks, 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (auto& tr : task_results) {
    for (auto& row : tr.rows) results.rows.push_back(std::move(row));
    if (tr.failure) results.failures.push_back(std::move(*tr.failure));
  }

  // per-cell means over seeds, then grand means over cells
  struct Acc {
    double p = 0, r = 0, f = 0;
    std::size_t n = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Acc> per_cell;
  for (const auto& row : results.rows) {
    Acc& a = per_cell[{row.fingerprint, row.method, row.mode}];
    a.p += row.precision;
    a.r += row.recall;
    a.f += row.f1;
    ++a.n;
  }
  for (const auto& method : options.methods) {
    for (const char* mode : kBenchModes) {
      const bool form_only =
          std::string(mode) == "exact_form" || std::string(mode) == "fuzzy_form";
      BenchSummaryEntry entry;
      for (std::size_t c = 0; c < results.cells.size(); ++c) {
        if (form_only) {
          bool noisy = false;
          for (const auto& [k, v] : results.cells[c].settings)
            if (k == "noise" && v != "0") noisy = true;
          if (noisy) continue;  // excluded from form-only aggregates
        }
        auto it = per_cell.find({results.cell_fingerprints[c], method, mode});
        if (it == per_cell.end() || it->second.n == 0) continue;
        const double n = static_cast<double>(it->second.n);
        entry.precision += it->second.p / n;
        entry.recall += it->second.r / n;
        entry.f1 += it->second.f / n;
        ++entry.cells;
      }
      if (entry.cells > 0) {
        entry.precision /= static_cast<double>(entry.cells);
        entry.recall /= static_cast<double>(entry.cells);
        entry.f1 /= static_cast<double>(entry.cells);
      }
      results.summary[{method, mode}] = entry;
    }
  }

  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - t_start;
  results.wall_seconds = wall.count();
  return results;
}

}  // namespace csar
