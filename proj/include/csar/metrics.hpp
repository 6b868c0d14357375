#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "csar/corpus.hpp"
#include "csar/evaluation.hpp"
#include "csar/rng.hpp"

namespace csar {

/// Inventory analytics. Entropies are in bits and, like the size means,
/// weighted by morpheme prevalence.
struct InventoryMetrics {
  std::size_t inventory_size = 0;
  double inventory_entropy = 0.0;
  bool entropy_defined = true;  // false when total prevalence is zero
  double synonymy = 0.0;
  double polysemy = 0.0;
  double mean_form_size = 0.0;
  double mean_meaning_size = 0.0;
};

namespace metricsdetail {

inline double entropy(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

/// Prevalence-weighted mean over groups of the entropy of the
/// prevalence-conditioned distribution within each group.
inline double grouped_entropy(
    const std::map<std::vector<TokenId>, std::map<std::vector<TokenId>, double>>&
        groups) {
  double total = 0.0;
  for (const auto& [key, members] : groups)
    for (const auto& [member, w] : members) total += w;
  if (total <= 0.0) return 0.0;
  double result = 0.0;
  for (const auto& [key, members] : groups) {
    std::vector<double> weights;
    double group_total = 0.0;
    for (const auto& [member, w] : members) {
      weights.push_back(w);
      group_total += w;
    }
    if (group_total <= 0.0) continue;
    result += (group_total / total) * entropy(weights);
  }
  return result;
}

}  // namespace metricsdetail

/// Shannon entropy of the prevalence-normalized distribution over morphemes.
inline double inventory_entropy(const Inventory& inv, bool* defined = nullptr) {
  std::vector<double> w;
  w.reserve(inv.morphemes.size());
  double total = 0.0;
  for (const auto& m : inv.morphemes) {
    w.push_back(m.prevalence);
    total += m.prevalence;
  }
  if (defined) *defined = total > 0.0;
  return metricsdetail::entropy(w);
}

/// Entropy across forms for a given meaning, prevalence weighted.
inline double synonymy(const Inventory& inv) {
  std::map<std::vector<TokenId>, std::map<std::vector<TokenId>, double>> by_meaning;
  for (const auto& m : inv.morphemes) by_meaning[m.meaning][m.form] += m.prevalence;
  return metricsdetail::grouped_entropy(by_meaning);
}

/// Entropy across meanings for a given form, prevalence weighted.
inline double polysemy(const Inventory& inv) {
  std::map<std::vector<TokenId>, std::map<std::vector<TokenId>, double>> by_form;
  for (const auto& m : inv.morphemes) by_form[m.form][m.meaning] += m.prevalence;
  return metricsdetail::grouped_entropy(by_form);
}

/// Prevalence-weighted mean form and meaning token counts.
inline std::pair<double, double> mean_sizes(const Inventory& inv) {
  double total = 0.0, form_sum = 0.0, meaning_sum = 0.0;
  for (const auto& m : inv.morphemes) {
    total += m.prevalence;
    form_sum += m.prevalence * static_cast<double>(m.form.size());
    meaning_sum += m.prevalence * static_cast<double>(m.meaning.size());
  }
  if (total <= 0.0) {
    // unweighted fallback for inventories without prevalence
    if (inv.morphemes.empty()) return {0.0, 0.0};
    for (const auto& m : inv.morphemes) {
      form_sum += static_cast<double>(m.form.size());
      meaning_sum += static_cast<double>(m.meaning.size());
    }
    const double n = static_cast<double>(inv.morphemes.size());
    return {form_sum / n, meaning_sum / n};
  }
  return {form_sum / total, meaning_sum / total};
}

inline InventoryMetrics inventory_metrics(const Inventory& inv) {
  InventoryMetrics m;
  m.inventory_size = inv.morphemes.size();
  m.inventory_entropy = inventory_entropy(inv, &m.entropy_defined);
  m.synonymy = synonymy(inv);
  m.polysemy = polysemy(inv);
  std::tie(m.mean_form_size, m.mean_meaning_size) = mean_sizes(inv);
  return m;
}

struct ToposimResult {
  double rho = 0.0;
  bool defined = false;  // false when either distance vector has no variance
  std::size_t pairs = 0;
};

namespace metricsdetail {

/// Average ranks with tie correction.
inline std::vector<double> ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  std::vector<double> r(values.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

}  // namespace metricsdetail

inline double spearman(const std::vector<double>& x, const std::vector<double>& y,
                       bool* defined = nullptr) {
  auto same = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] != v[0]) return false;
    return true;
  };
  if (x.size() < 2 || same(x) || same(y)) {
    if (defined) *defined = false;
    return 0.0;
  }
  if (defined) *defined = true;
  return metricsdetail::pearson(metricsdetail::ranks(x), metricsdetail::ranks(y));
}

/// Topographic similarity: Spearman correlation between pairwise utterance
/// distances (normalized insertion-deletion) and meaning distances (Jaccard),
/// over a seeded sample of record pairs.
inline ToposimResult toposim(const Corpus& corpus, std::size_t sample_pairs = 50000,
                             std::uint64_t seed = 0) {
  ToposimResult result;
  const std::size_t n = corpus.records.size();
  if (n < 2) return result;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  const std::size_t total =
      n * (n - 1) / 2 < sample_pairs ? n * (n - 1) / 2 : sample_pairs;
  if (n * (n - 1) / 2 <= sample_pairs) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  } else {
    Rng rng = Rng::stream(seed, "toposim");
    std::set<std::uint64_t> seen;
    while (pairs.size() < total) {
      const auto i = static_cast<std::uint32_t>(rng.index(n));
      const auto j = static_cast<std::uint32_t>(rng.index(n));
      if (i == j) continue;
      const std::uint32_t lo = std::min(i, j), hi = std::max(i, j);
      const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
      if (seen.insert(key).second) pairs.emplace_back(lo, hi);
    }
  }
  std::vector<double> du, dm;
  du.reserve(pairs.size());
  dm.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const Record& a = corpus.records[i];
    const Record& b = corpus.records[j];
    du.push_back(1.0 - fuzzy_form_similarity_seq(a.form, b.form));
    dm.push_back(1.0 - evaldetail::jaccard(a.meaning, b.meaning));
  }
  result.pairs = pairs.size();
  result.rho = spearman(du, dm, &result.defined);
  return result;
}

}  // namespace csar
