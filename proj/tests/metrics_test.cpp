#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "csar/metrics.hpp"
#include "csar/procgen.hpp"
#include "test_util.hpp"

using namespace csar;

namespace {

Inventory make_inventory(
    const std::vector<std::tuple<std::string, std::string, double>>& items) {
  Inventory inv;
  for (const auto& [form, meaning, prevalence] : items) {
    Morpheme m;
    for (const auto& t : test::toks(form)) m.form.push_back(inv.form_vocab.intern(t));
    for (const auto& t : test::toks(meaning))
      m.meaning.push_back(inv.meaning_vocab.intern(t));
    std::sort(m.meaning.begin(), m.meaning.end());
    m.prevalence = prevalence;
    m.order = static_cast<std::uint32_t>(inv.morphemes.size());
    inv.morphemes.push_back(std::move(m));
  }
  return inv;
}

}  // namespace

TEST_CASE("inventory entropy of uniform prevalences") {
  Inventory inv = make_inventory({
      {"a", "A", 0.25}, {"b", "B", 0.25}, {"c", "C", 0.25}, {"d", "D", 0.25}});
  CHECK(inventory_entropy(inv) == Catch::Approx(2.0));

  Inventory one = make_inventory({{"a", "A", 0.7}});
  CHECK(inventory_entropy(one) == Catch::Approx(0.0));

  Inventory skewed = make_inventory({
      {"a", "A", 0.5}, {"b", "B", 0.25}, {"c", "C", 0.25}});
  CHECK(inventory_entropy(skewed) == Catch::Approx(1.5));
}

TEST_CASE("zero total prevalence is flagged") {
  Inventory inv = make_inventory({{"a", "A", 0.0}, {"b", "B", 0.0}});
  bool defined = true;
  CHECK(inventory_entropy(inv, &defined) == 0.0);
  CHECK(!defined);
}

TEST_CASE("bijective inventories have zero synonymy and polysemy") {
  Inventory inv = make_inventory({
      {"a", "A", 0.5}, {"b", "B", 0.3}, {"c", "C", 0.2}});
  CHECK(synonymy(inv) == 0.0);
  CHECK(polysemy(inv) == 0.0);
}

TEST_CASE("two equal-prevalence forms of one meaning carry one bit of synonymy") {
  Inventory inv = make_inventory({{"a", "M", 0.5}, {"b", "M", 0.5}});
  CHECK(synonymy(inv) == Catch::Approx(1.0));
  CHECK(polysemy(inv) == Catch::Approx(0.0));

  Inventory poly = make_inventory({{"f", "A", 0.5}, {"f", "B", 0.5}});
  CHECK(synonymy(poly) == Catch::Approx(0.0));
  CHECK(polysemy(poly) == Catch::Approx(1.0));
}

TEST_CASE("synonymy weights groups by their prevalence share") {
  // meaning M: forms 0.3/0.1 (H = 0.811...); meaning N: one form (H = 0)
  Inventory inv = make_inventory({
      {"a", "M", 0.3}, {"b", "M", 0.1}, {"c", "N", 0.6}});
  const double h = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  CHECK(synonymy(inv) == Catch::Approx(0.4 * h));
}

TEST_CASE("mean sizes are prevalence weighted") {
  Inventory inv = make_inventory({{"a b", "A", 0.5}, {"c d", "B C", 0.5}});
  auto [form_size, meaning_size] = mean_sizes(inv);
  CHECK(form_size == Catch::Approx(2.0));
  CHECK(meaning_size == Catch::Approx(1.5));

  Inventory skew = make_inventory({{"a", "A", 0.75}, {"x y z", "B", 0.25}});
  CHECK(mean_sizes(skew).first == Catch::Approx(1.5));
}

TEST_CASE("spearman handles ties and monotone transforms") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y = {2, 4, 6, 8, 10};
  CHECK(spearman(x, y) == Catch::Approx(1.0));
  // any order-preserving transform leaves the statistic unchanged
  std::vector<double> y2;
  for (double v : y) y2.push_back(v * v * v + 7);
  CHECK(spearman(x, y2) == Catch::Approx(1.0));
  std::vector<double> rev = {10, 8, 6, 4, 2};
  CHECK(spearman(x, rev) == Catch::Approx(-1.0));

  bool defined = true;
  std::vector<double> flat = {1, 1, 1, 1, 1};
  CHECK(spearman(x, flat, &defined) == 0.0);
  CHECK(!defined);

  // tie-aware ranks: x has a tie, correlation stays strictly between
  std::vector<double> xt = {1, 2, 2, 3};
  std::vector<double> yt = {1, 2, 3, 4};
  CHECK(spearman(xt, yt) == Catch::Approx(0.9486832980505138));
}

TEST_CASE("toposim is one when utterances mirror meanings") {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> data;
  Rng rng(42);
  const char* atoms[] = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 60; ++i) {
    std::set<std::string> meaning;
    const std::size_t k = 1 + rng.index(5);
    for (std::size_t j = 0; j < k; ++j) meaning.insert(atoms[rng.index(6)]);
    std::vector<std::string> sorted(meaning.begin(), meaning.end());
    data.emplace_back(sorted, sorted);  // utterance = sorted meaning tokens
  }
  Corpus c = test::make_corpus(data);
  ToposimResult r = toposim(c, 50000, 0);
  REQUIRE(r.defined);
  CHECK(r.rho == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("toposim is near zero for shuffled pairings") {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> data;
  Rng rng(7);
  const char* atoms[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<std::vector<std::string>> meanings;
  for (int i = 0; i < 1500; ++i) {
    std::set<std::string> meaning;
    const std::size_t k = 1 + rng.index(6);
    for (std::size_t j = 0; j < k; ++j) meaning.insert(atoms[rng.index(8)]);
    meanings.push_back({meaning.begin(), meaning.end()});
  }
  // utterances drawn from unrelated records break the correlation
  for (int i = 0; i < 1500; ++i)
    data.emplace_back(meanings[rng.index(meanings.size())], meanings[i]);
  Corpus c = test::make_corpus(data);
  ToposimResult r = toposim(c, 10000, 3);
  REQUIRE(r.defined);
  CHECK(r.pairs == 10000);
  CHECK(std::abs(r.rho) <= 0.05);
}

TEST_CASE("toposim uses all pairs when the corpus is small") {
  Corpus c = test::tiny_corpus();
  ToposimResult r = toposim(c, 50000, 0);
  CHECK(r.pairs == 3);
}

TEST_CASE("inventory_metrics bundles the analytics") {
  Inventory inv = make_inventory({{"a b", "M", 0.5}, {"c", "M", 0.5}});
  InventoryMetrics m = inventory_metrics(inv);
  CHECK(m.inventory_size == 2);
  CHECK(m.inventory_entropy == Catch::Approx(1.0));
  CHECK(m.synonymy == Catch::Approx(1.0));
  CHECK(m.polysemy == Catch::Approx(0.0));
  CHECK(m.mean_form_size == Catch::Approx(1.5));
  CHECK(m.mean_meaning_size == Catch::Approx(1.0));
  CHECK(m.entropy_defined);
}
