#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "mouselab/clustering.hpp"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/env.hpp"
#include "mouselab/solver.hpp"

using namespace mouselab;

namespace {

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Straightforward quadratic-time UPGMA: clusters labeled by their smallest
// member; ties merge the smallest label pair. Returns the partition at N.
std::vector<std::vector<int>> oracle_upgma(
    const std::vector<std::vector<double>>& vecs, int N) {
  std::map<int, std::vector<int>> clusters;
  for (int i = 0; i < int(vecs.size()); ++i) clusters[i] = {i};
  while (int(clusters.size()) > N) {
    double best = 1e300;
    std::pair<int, int> pick{-1, -1};
    for (auto a = clusters.begin(); a != clusters.end(); ++a)
      for (auto b = std::next(a); b != clusters.end(); ++b) {
        double sum = 0;
        for (int i : a->second)
          for (int j : b->second) sum += l1(vecs[size_t(i)], vecs[size_t(j)]);
        double d = sum / double(a->second.size() * b->second.size());
        std::pair<int, int> key{std::min(a->first, b->first),
                                std::max(a->first, b->first)};
        if (d < best - 1e-12 || (std::abs(d - best) <= 1e-12 && key < pick)) {
          best = d;
          pick = key;
        }
      }
    auto& dst = clusters[pick.first];
    auto& src = clusters[pick.second];
    dst.insert(dst.end(), src.begin(), src.end());
    std::sort(dst.begin(), dst.end());
    clusters.erase(pick.second);
  }
  std::vector<std::vector<int>> out;
  for (auto& [label, members] : clusters) out.push_back(members);
  return out;  // sorted by label = first member
}

EnvironmentSpec mini_env() {
  EnvironmentSpec env;
  env.kind = EnvKind::Custom;
  env.tree = make_112_tree();
  env.support = {{-4, -2, 2, 4}, {-8, -4, 4, 8}, {-48, -24, 24, 48}};
  return env;
}

GrammarConfig small_grammar() {
  GrammarConfig g;
  g.base = {"is_observed", "has_largest_depth", "is_root_child"};
  g.general = {"no_click_made_yet"};
  g.among = {"has_largest_depth"};
  g.among_width = 1;
  g.among_with_width = 1;
  return g;
}

}  // namespace

TEST_CASE("upgma_cut matches the brute-force oracle on small inputs") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0, 1);
  for (int trial = 0; trial < 120; ++trial) {
    size_t n = 2 + rng() % 7;  // 2..8 vectors
    size_t dim = 1 + rng() % 4;
    std::vector<std::vector<double>> vecs(n, std::vector<double>(dim));
    for (auto& v : vecs)
      for (auto& x : v) x = (rng() % 3 == 0) ? 0.0 : unif(rng);  // induce ties
    for (int N = 1; N <= int(n); ++N) {
      auto got = upgma_cut(vecs, N);
      auto want = oracle_upgma(vecs, N);
      REQUIRE(got.clusters.size() == want.size());
      CHECK(got.clusters == want);
    }
  }
}

TEST_CASE("documented three-point example") {
  std::vector<std::vector<double>> vecs = {
      {0, 0, 0}, {0, 0, 1}, {1, 1, 1}};
  auto part = upgma_cut(vecs, 2);
  REQUIRE(part.clusters.size() == 2);
  CHECK(part.clusters[0] == std::vector<int>{0, 1});
  CHECK(part.clusters[1] == std::vector<int>{2});
}

TEST_CASE("linkage heights are non-decreasing and cuts nest") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0, 1);
  std::vector<std::vector<double>> vecs(12, std::vector<double>(3));
  for (auto& v : vecs)
    for (auto& x : v) x = unif(rng);
  Linkage link = build_linkage(vecs);
  REQUIRE(link.trace.size() == vecs.size() - 1);
  for (size_t i = 1; i < link.trace.size(); ++i)
    CHECK(link.trace[i].height >= link.trace[i - 1].height - 1e-12);

  // Partition at N is refined by the partition at N+1: every cluster at
  // N+1 is contained in a single cluster at N.
  for (int N = 1; N < int(vecs.size()); ++N) {
    auto coarse = cut_linkage(link, N);
    auto fine = cut_linkage(link, N + 1);
    for (const auto& fc : fine.clusters) {
      int hits = 0;
      for (const auto& cc : coarse.clusters) {
        bool contains = std::includes(cc.begin(), cc.end(), fc.begin(), fc.end());
        hits += contains;
      }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("split_cluster is deterministic and keeps terminations in train") {
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 24, 13);
  auto pairs = demos.pairs();

  std::vector<int> cluster;
  for (int i = 0; i < int(pairs.size()); ++i) cluster.push_back(i);

  ClusterValueOptions opts;
  opts.seed = 5;
  std::vector<DemoPair> train, val, train2, val2;
  split_cluster(cluster, pairs, opts, 17, train, val);
  split_cluster(cluster, pairs, opts, 17, train2, val2);
  CHECK(train.size() == train2.size());
  CHECK(val.size() == val2.size());

  size_t clicks = 0;
  for (const auto& p : pairs) clicks += p.action.is_click();
  CHECK(train.size() + val.size() == pairs.size());
  for (const auto& p : val) CHECK(p.action.is_click());  // ⊥ always trains
  size_t train_terms = 0;
  for (const auto& p : train) train_terms += !p.action.is_click();
  CHECK(train_terms == pairs.size() - clicks);
  // Train share of the clicks respects the split fraction within rounding.
  CHECK(std::abs(double(train.size() - train_terms) - 0.7 * double(clicks)) <= 1.0);

  // Tiny clusters train on everything clickable.
  std::vector<int> tiny;
  for (int i = 0; i < int(pairs.size()) && tiny.size() < 2; ++i)
    if (pairs[size_t(i)].action.is_click()) tiny.push_back(i);
  std::vector<DemoPair> ttrain, tval;
  split_cluster(tiny, pairs, opts, 3, ttrain, tval);
  CHECK(ttrain.size() == 2);
  CHECK(tval.empty());
}

TEST_CASE("heuristic value is bounded by the cluster share") {
  auto env = mini_env();
  auto preds = enumerate_predicates(small_grammar());
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 30, 4);
  auto pairs = demos.click_pairs();
  REQUIRE(pairs.size() >= 8);

  std::vector<int> cluster;
  for (int i = 0; i < int(pairs.size()) / 2; ++i) cluster.push_back(i);
  ClusterValueOptions opts;
  opts.seed = 11;
  auto cv = heuristic_value(cluster, pairs, pairs.size(), preds, env, opts);
  double share = double(cluster.size()) / double(pairs.size());
  CHECK(cv.V >= 0.0);
  CHECK(cv.V <= share + 1e-12);  // geometric-mean likelihood is at most 1

  auto cv2 = heuristic_value(cluster, pairs, pairs.size(), preds, env, opts);
  CHECK(cv.V == cv2.V);  // deterministic
}

TEST_CASE("elbow candidates stay inside the grid") {
  auto env = mini_env();
  auto preds = enumerate_predicates(small_grammar());
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 30, 6);
  auto pairs = demos.click_pairs();

  std::vector<int> grid = {2, 3, 4, 5, 6};
  ClusterValueOptions opts;
  opts.seed = 2;
  auto r = elbow_candidates(pairs, preds, env, grid, 0.025, 3, opts);
  CHECK(r.curve.size() == grid.size());
  CHECK(!r.candidates.empty());
  CHECK(r.candidates.size() <= 3);
  for (int n : r.candidates)
    CHECK(std::find(grid.begin(), grid.end(), n) != grid.end());

  auto r2 = elbow_candidates(pairs, preds, env, grid, 0.025, 3, opts);
  CHECK(r.candidates == r2.candidates);
  for (size_t i = 0; i < r.curve.size(); ++i) {
    CHECK(r.curve[i].first == r2.curve[i].first);
    CHECK(r.curve[i].second == doctest::Approx(r2.curve[i].second));
  }
}
