#include "mouselab/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mouselab/rng.hpp"

namespace mouselab {

Linkage build_linkage(const std::vector<std::vector<double>>& vectors) {
  size_t n = vectors.size();
  if (n == 0) throw std::invalid_argument("no vectors to cluster");
  Linkage lk;
  lk.n = n;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double s = 0;
      for (size_t k = 0; k < vectors[i].size(); ++k)
        s += std::abs(vectors[i][k] - vectors[j][k]);
      d[i][j] = d[j][i] = s;
    }
  std::vector<int> labels;  // active cluster labels, ascending
  for (size_t i = 0; i < n; ++i) labels.push_back(int(i));
  std::vector<size_t> size(n, 1);
  while (labels.size() > 1) {
    int bi = -1, bj = -1;
    double best = 1e300;
    for (size_t i = 0; i < labels.size(); ++i)
      for (size_t j = i + 1; j < labels.size(); ++j)
        if (d[labels[i]][labels[j]] < best) {
          best = d[labels[i]][labels[j]];
          bi = labels[i];
          bj = labels[j];
        }
    lk.trace.push_back({bi, bj, best});
    for (int k : labels) {
      if (k == bi || k == bj) continue;
      d[bi][k] = d[k][bi] =
          (double(size[bi]) * d[bi][k] + double(size[bj]) * d[bj][k]) /
          double(size[bi] + size[bj]);
    }
    size[bi] += size[bj];
    labels.erase(std::find(labels.begin(), labels.end(), bj));
  }
  return lk;
}

ClusterPartition cut_linkage(const Linkage& linkage, int N) {
  if (N < 1 || size_t(N) > linkage.n)
    throw std::invalid_argument("cluster count out of range");
  std::map<int, std::vector<int>> members;
  for (size_t i = 0; i < linkage.n; ++i) members[int(i)] = {int(i)};
  ClusterPartition part;
  part.N = N;
  for (size_t m = 0; m + size_t(N) < linkage.n; ++m) {
    const Merge& mg = linkage.trace[m];
    auto& dst = members[mg.a];
    auto& src = members[mg.b];
    dst.insert(dst.end(), src.begin(), src.end());
    members.erase(mg.b);
    part.linkage_trace.push_back(mg);
  }
  for (auto& [label, mem] : members) {
    std::sort(mem.begin(), mem.end());
    part.clusters.push_back(std::move(mem));
  }
  return part;
}

ClusterPartition upgma_cut(const std::vector<std::vector<double>>& vectors, int N) {
  return cut_linkage(build_linkage(vectors), N);
}

void split_cluster(const std::vector<int>& cluster,
                   const std::vector<DemoPair>& pairs,
                   const ClusterValueOptions& opts, uint64_t salt,
                   std::vector<DemoPair>& train, std::vector<DemoPair>& validation) {
  // One uniform shuffle over the whole cluster, clicks and terminate pairs
  // alike: train-side terminations generate negative examples, while
  // validation-side ones demand the formula actually stops at that belief.
  std::vector<int> members = cluster;
  if (members.size() <= 2) {
    for (int i : members) train.push_back(pairs[i]);
    return;
  }
  auto rng = make_rng(opts.seed, salt);
  std::shuffle(members.begin(), members.end(), rng);
  size_t ntrain = size_t(std::llround(opts.split * double(members.size())));
  ntrain = std::clamp<size_t>(ntrain, 1, members.size() - 1);
  for (size_t k = 0; k < members.size(); ++k)
    (k < ntrain ? train : validation).push_back(pairs[members[k]]);
}

namespace {

uint64_t cluster_salt(const std::vector<int>& cluster) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (int i : cluster) {
    h ^= uint64_t(uint32_t(i));
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

ClusterValue heuristic_value(const std::vector<int>& cluster,
                             const std::vector<DemoPair>& pairs,
                             size_t total_pairs, const PredicateSet& preds,
                             const EnvironmentSpec& env,
                             const ClusterValueOptions& opts) {
  if (cluster.empty()) throw std::invalid_argument("empty cluster");
  std::vector<DemoPair> train, validation;
  split_cluster(cluster, pairs, opts, cluster_salt(cluster), train, validation);
  auto negatives = negative_examples(env, train);
  LppResult r = lpp_map(train, validation, negatives, preds, env,
                        opts.max_depth, opts.lambda, opts.cache);
  ClusterValue cv;
  if (!r.formula) return cv;
  double likelihood =
      opts.geometric
          ? (validation.empty() ? 1.0
                                : std::exp(r.log_likelihood / double(validation.size())))
          : std::exp(r.log_likelihood);
  cv.V = likelihood * double(cluster.size()) / double(total_pairs);
  return cv;
}

namespace {

double cv_with_cache(const std::vector<DemoPair>& pairs, const Linkage& linkage,
                     const PredicateSet& preds, const EnvironmentSpec& env,
                     int N, double X, const ClusterValueOptions& opts,
                     std::map<uint64_t, double>* cache) {
  ClusterPartition part = cut_linkage(linkage, N);
  double cv = 0;
  for (size_t ci = 0; ci < part.clusters.size(); ++ci) {
    const auto& c = part.clusters[ci];
    if (double(c.size()) / double(pairs.size()) < X) continue;
    uint64_t key = cluster_salt(c);
    double v;
    if (cache && cache->count(key)) {
      v = (*cache)[key];
    } else {
      ClusterValue val = heuristic_value(c, pairs, pairs.size(), preds, env, opts);
      v = val.V;
      if (cache) (*cache)[key] = v;
    }
    cv += v;
  }
  return cv;
}

}  // namespace

double clustering_value(const std::vector<DemoPair>& pairs,
                        const Linkage& linkage, const PredicateSet& preds,
                        const EnvironmentSpec& env, int N, double X,
                        const ClusterValueOptions& opts) {
  return cv_with_cache(pairs, linkage, preds, env, N, X, opts, nullptr);
}

ElbowResult elbow_candidates(const std::vector<DemoPair>& pairs,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env,
                             const std::vector<int>& grid, double X, int K,
                             const ClusterValueOptions& opts) {
  if (grid.size() < 2) throw std::invalid_argument("elbow grid needs >= 2 points");
  std::vector<std::vector<double>> vectors;
  std::vector<int> click_idx;
  {
    std::vector<FeaturizedRow> rows;
    for (size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].action.is_click()) {
        rows.push_back({pairs[i].belief, pairs[i].action, pairs[i].prev_click});
        click_idx.push_back(int(i));
      }
    BinaryMatrix m = featurize(rows, preds, env);
    vectors.assign(m.rows, std::vector<double>(m.cols, 0));
    for (size_t r = 0; r < m.rows; ++r)
      for (size_t c = 0; c < m.cols; ++c) vectors[r][c] = m.get(r, c) ? 1 : 0;
  }
  // Cluster the click pairs; heuristic values are computed over them too
  // (terminate pairs re-enter at interpretation time).
  std::vector<DemoPair> clicks;
  for (int i : click_idx) clicks.push_back(pairs[size_t(i)]);
  Linkage linkage = build_linkage(vectors);

  ElbowResult res;
  std::map<uint64_t, double> cache;
  for (int N : grid) {
    int n = std::min<int>(N, int(clicks.size()));
    res.curve.emplace_back(
        N, cv_with_cache(clicks, linkage, preds, env, n, X, opts, &cache));
  }
  std::vector<std::pair<double, int>> increases;  // (-increase, N) for sorting
  bool any_positive = false;
  for (size_t j = 1; j < res.curve.size(); ++j) {
    double inc = res.curve[j].second - res.curve[j - 1].second;
    if (inc > 0) any_positive = true;
    increases.emplace_back(-inc, res.curve[j].first);
  }
  if (!any_positive) {
    res.no_elbow = true;
    for (size_t j = 1; j < grid.size() && res.candidates.size() < size_t(K); ++j)
      res.candidates.push_back(grid[j]);
    return res;
  }
  std::sort(increases.begin(), increases.end());
  for (size_t j = 0; j < increases.size() && res.candidates.size() < size_t(K); ++j)
    res.candidates.push_back(increases[j].second);
  return res;
}

}  // namespace mouselab
