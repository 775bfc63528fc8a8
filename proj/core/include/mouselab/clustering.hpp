#pragma once
#include <cstdint>
#include <vector>

#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/lpp.hpp"

namespace mouselab {

struct Merge {
  int a = 0, b = 0;     // cluster labels (smallest original member index)
  double height = 0;    // average-linkage distance at the merge
};

// Full agglomeration sequence; cutting at any N reuses the same trace.
struct Linkage {
  size_t n = 0;
  std::vector<Merge> trace;  // n-1 merges, heights non-decreasing
};

Linkage build_linkage(const std::vector<std::vector<double>>& vectors);

struct ClusterPartition {
  std::vector<std::vector<int>> clusters;  // sorted member indices, sorted by first member
  int N = 0;
  std::vector<Merge> linkage_trace;  // the merges that were applied
};

ClusterPartition cut_linkage(const Linkage& linkage, int N);

// Average-linkage (UPGMA) clustering under l1 distance, cut at N clusters.
// Distance ties merge the lexicographically smallest label pair.
ClusterPartition upgma_cut(const std::vector<std::vector<double>>& vectors, int N);

struct ClusterValueOptions {
  int max_depth = 5;
  double split = 0.7;      // train fraction per cluster
  double lambda = 1.0;
  uint64_t seed = 0;
  bool geometric = true;   // geometric-mean per-pair likelihood (default) vs raw product
  FeatureCache* cache = nullptr;  // optional shared feature-row memo
};

struct ClusterValue {
  int cluster_index = -1;
  double V = 0;
};

// Bayesian heuristic value: per-pair validation likelihood of the cluster's
// MAP formula, scaled by the cluster's share of all pairs. `cluster` indexes
// into `pairs`; `total_pairs` is |D|.
ClusterValue heuristic_value(const std::vector<int>& cluster,
                             const std::vector<DemoPair>& pairs,
                             size_t total_pairs, const PredicateSet& preds,
                             const EnvironmentSpec& env,
                             const ClusterValueOptions& opts);

// Split a cluster's pairs into train/validation (deterministic shuffle from
// opts.seed and the cluster's first member). Size 1-2 clusters put
// everything in train. Terminate pairs train (they supply the negative
// examples; validation scores click acceptance).
void split_cluster(const std::vector<int>& cluster,
                   const std::vector<DemoPair>& pairs,
                   const ClusterValueOptions& opts, uint64_t salt,
                   std::vector<DemoPair>& train, std::vector<DemoPair>& validation);

// CV(N, X): sum of heuristic values over clusters with |C|/|D| >= X.
double clustering_value(const std::vector<DemoPair>& pairs,
                        const Linkage& linkage, const PredicateSet& preds,
                        const EnvironmentSpec& env, int N, double X,
                        const ClusterValueOptions& opts);

struct ElbowResult {
  std::vector<int> candidates;               // K cluster counts
  bool no_elbow = false;                     // CV flat: predicates don't separate
  std::vector<std::pair<int, double>> curve; // (N, CV) over the grid
};

ElbowResult elbow_candidates(const std::vector<DemoPair>& pairs,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env,
                             const std::vector<int>& grid, double X, int K,
                             const ClusterValueOptions& opts);

}  // namespace mouselab
