#include "mouselab/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mouselab/rng.hpp"

namespace mouselab {

std::vector<NegativeExample> negative_examples_from_table(
    ValueTable& table, const std::vector<DemoPair>& pairs, double tie_eps) {
  std::vector<NegativeExample> out;
  const EnvironmentSpec& env = table.env();
  for (const auto& p : pairs) {
    auto optimal = table.optimal_action_set(p.belief, tie_eps);
    for (int n = 1; n <= env.tree.node_count; ++n) {
      if (env.observed(p.belief, n)) continue;
      Computation c = Computation::click(n);
      if (std::find(optimal.begin(), optimal.end(), c) == optimal.end())
        out.push_back({p.belief, c, p.prev_click});
    }
  }
  return out;
}

namespace {

struct Candidate {
  Formula formula;
  double m_f = 0;
  double ratio = 0;
  int rho = 0;
};

ClusterValueOptions value_options(const InterpretConfig& cfg) {
  ClusterValueOptions o;
  o.max_depth = cfg.max_depth;
  o.split = cfg.split;
  o.lambda = cfg.lambda;
  o.seed = cfg.seed;
  o.geometric = cfg.geometric_likelihood;
  return o;
}

struct Searcher {
  const PredicateSet* preds;
  const EnvironmentSpec* env;
  ValueTable* table;
  const InterpretConfig* cfg;
  std::map<uint64_t, double> return_cache;  // formula digest -> m_f
  FeatureCache features;                    // (belief, action, prev) -> row bits

  double estimate_return(const Formula& f) {
    uint64_t key = f.digest();
    auto it = return_cache.find(key);
    if (it != return_cache.end()) return it->second;
    FormulaPolicy policy(f, *preds, *env);
    double m_f = estimate_mean_return(*env, policy, cfg->rollouts,
                                      mix64(cfg->seed ^ key));
    return_cache.emplace(key, m_f);
    return m_f;
  }

  // rho-loop + delta-filter + fewest-distinct-predicates selection. With
  // resplit_per_rho the per-cluster S-split is redrawn for every rho (the
  // split sits inside the iteration loop), so each depth gets an independent
  // train/validation draw; without it all depths share one draw (the
  // single-shot baseline).
  std::optional<Candidate> search(const std::vector<std::vector<int>>& clusters,
                                  const std::vector<DemoPair>& pairs,
                                  uint64_t iteration_salt,
                                  bool resplit_per_rho = true) {
    ClusterValueOptions opts = value_options(*cfg);
    std::vector<Candidate> cands;
    for (int rho = 1; rho <= cfg->max_depth; ++rho) {
      uint64_t draw = resplit_per_rho ? uint64_t(rho) : 1;
      std::vector<DemoPair> train, validation;
      for (size_t ci = 0; ci < clusters.size(); ++ci)
        split_cluster(clusters[ci], pairs, opts,
                      mix64(iteration_salt ^ mix64(draw << 8 | (ci + 1))),
                      train, validation);
      // Negatives come from the train-side beliefs only (terminate steps
      // train, so stopping beliefs still contribute the clicks the expert
      // declined).
      auto negatives =
          negative_examples_from_table(*table, train, cfg->tie_epsilon);
      LppResult r = lpp_map(train, validation, negatives, *preds, *env, rho,
                            cfg->lambda, &features);
      if (!r.formula) continue;
      Candidate c;
      c.formula = *r.formula;
      c.m_f = estimate_return(c.formula);
      c.ratio = c.m_f / cfg->mean_expert_reward;
      c.rho = rho;
      cands.push_back(std::move(c));
    }
    if (cands.empty()) return std::nullopt;
    std::vector<Candidate> kept;
    for (const auto& f : cands) {
      bool ok = true;
      for (const auto& g : cands)
        if (!(g.ratio < f.ratio + cfg->delta)) { ok = false; break; }
      if (ok) kept.push_back(f);
    }
    if (kept.empty()) return std::nullopt;  // unreachable: the max always passes
    const Candidate* best = &kept[0];
    for (const auto& f : kept)
      if (f.formula.distinct_predicates() < best->formula.distinct_predicates())
        best = &f;
    return *best;
  }

  bool accepted(const Candidate& c) const {
    double threshold =
        cfg->accept_alpha_minus_delta ? cfg->alpha - cfg->delta : cfg->alpha;
    return c.ratio >= threshold;
  }
};

InterpretResult no_solution(std::string reason, int iterations) {
  InterpretResult r;
  r.reason = std::move(reason);
  r.iterations = iterations;
  return r;
}

void check_preconditions(const InterpretConfig& cfg) {
  if (cfg.mean_expert_reward <= 0)
    throw std::invalid_argument("mean expert reward must be positive");
  if (cfg.split <= 0 || cfg.split >= 1)
    throw std::invalid_argument("split must be in (0,1)");
  if (cfg.cut_size < 0 || cfg.cut_size >= 1)
    throw std::invalid_argument("cut size must be in [0,1)");
  if (cfg.max_depth < 1 || cfg.rollouts < 1)
    throw std::invalid_argument("max_depth and rollouts must be >= 1");
}

std::optional<Candidate> search_clusters(
    Searcher& s, const std::vector<std::vector<int>>& clusters,
    const std::vector<DemoPair>& pairs, uint64_t iteration_salt,
    bool resplit_per_rho = true) {
  return s.search(clusters, pairs, iteration_salt, resplit_per_rho);
}

InterpretResult found_result(const Candidate& c, double support, int iterations) {
  InterpretResult r;
  r.found = true;
  r.formula = c.formula;
  r.m_f = c.m_f;
  r.perf_ratio = c.ratio;
  r.support_fraction = support;
  r.iterations = iterations;
  return r;
}

}  // namespace

InterpretResult ai_interpret(const DemonstrationSet& demo_set,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env, ValueTable& table,
                             const InterpretConfig& config) {
  check_preconditions(config);
  std::vector<DemoPair> pairs = demo_set.pairs();
  if (pairs.empty()) return no_solution("no demonstrations", 0);

  std::vector<int> click_idx, term_idx;
  for (size_t i = 0; i < pairs.size(); ++i)
    (pairs[i].action.is_click() ? click_idx : term_idx).push_back(int(i));
  if (click_idx.empty()) return no_solution("no click demonstrations", 0);

  // Step 1-2: featurize the click pairs and cluster them.
  std::vector<FeaturizedRow> rows;
  for (int i : click_idx)
    rows.push_back({pairs[i].belief, pairs[i].action, pairs[i].prev_click});
  BinaryMatrix m = featurize(rows, preds, env);
  std::vector<std::vector<double>> vectors(m.rows, std::vector<double>(m.cols, 0));
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c) vectors[r][c] = m.get(r, c) ? 1 : 0;
  int N = std::min<int>(config.clusters, int(click_idx.size()));
  ClusterPartition part = upgma_cut(vectors, N);

  // Clusters in terms of full-pair indices; attach every terminate pair to
  // the cluster holding the most click pairs of its trajectory (largest
  // cluster when the trajectory has no clicks).
  std::vector<std::vector<int>> clusters;
  for (const auto& c : part.clusters) {
    std::vector<int> mem;
    for (int row : c) mem.push_back(click_idx[size_t(row)]);
    clusters.push_back(std::move(mem));
  }
  for (int ti : term_idx) {
    int best = -1;
    size_t best_score = 0;
    for (size_t ci = 0; ci < clusters.size(); ++ci) {
      size_t score = 0;
      for (int i : clusters[ci])
        if (pairs[size_t(i)].trajectory_id == pairs[size_t(ti)].trajectory_id) ++score;
      if (score > best_score) { best_score = score; best = int(ci); }
    }
    if (best < 0) {
      size_t largest = 0;
      for (size_t ci = 0; ci < clusters.size(); ++ci)
        if (clusters[ci].size() > clusters[size_t(largest)].size()) largest = ci;
      best = int(largest);
    }
    clusters[size_t(best)].push_back(ti);
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());

  // Step 3-4: heuristic values; keep representative clusters.
  Searcher s{&preds, &env, &table, &config, {}, FeatureCache(preds, env)};
  ClusterValueOptions vopts = value_options(config);
  vopts.cache = &s.features;
  struct Scored { std::vector<int> members; double V; };
  std::vector<Scored> live;
  for (const auto& c : clusters) {
    if (double(c.size()) / double(pairs.size()) < config.cut_size) continue;
    live.push_back({c, heuristic_value(c, pairs, pairs.size(), preds, env, vopts).V});
  }

  int iteration = 0;
  while (!live.empty()) {
    ++iteration;
    std::vector<std::vector<int>> members;
    size_t support = 0;
    for (const auto& c : live) {
      members.push_back(c.members);
      support += c.members.size();
    }
    auto cand = search_clusters(s, members, pairs, mix64(config.seed ^ uint64_t(iteration)));
    if (cand && s.accepted(*cand))
      return found_result(*cand, double(support) / double(pairs.size()), iteration);
    // Steps 20-21: drop the cluster with the lowest heuristic value.
    size_t drop = 0;
    for (size_t i = 1; i < live.size(); ++i)
      if (live[i].V < live[drop].V) drop = i;
    live.erase(live.begin() + std::ptrdiff_t(drop));
  }
  return no_solution("no formula met the aspiration ratio for any cluster subset",
                     iteration);
}

InterpretResult lpp_baseline(const DemonstrationSet& demo_set,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env, ValueTable& table,
                             const InterpretConfig& config) {
  check_preconditions(config);
  std::vector<DemoPair> pairs = demo_set.pairs();
  if (pairs.empty()) return no_solution("no demonstrations", 0);
  std::vector<int> all(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) all[i] = int(i);
  Searcher s{&preds, &env, &table, &config, {}, FeatureCache(preds, env)};
  // Single-shot: one S-split shared by every depth in the rho-loop.
  auto cand = search_clusters(s, {all}, pairs, mix64(config.seed ^ 1), false);
  if (cand && s.accepted(*cand)) return found_result(*cand, 1.0, 1);
  return no_solution(cand ? "best formula below the aspiration ratio"
                          : "no consistent formula (trivial False)",
                     1);
}

InterpretResult binary_interpret(const DemonstrationSet& demo_set,
                                 const PredicateSet& preds,
                                 const EnvironmentSpec& env, ValueTable& table,
                                 const InterpretConfig& config) {
  check_preconditions(config);
  std::vector<DemoPair> pairs = demo_set.pairs();
  if (pairs.empty()) return no_solution("no demonstrations", 0);

  Searcher s{&preds, &env, &table, &config, {}, FeatureCache(preds, env)};
  std::vector<int> all(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) all[i] = int(i);
  std::vector<int> current = all;
  size_t removed = 0;
  int iteration = 0;
  bool prev_success = false;
  std::optional<InterpretResult> best;

  auto resample = [&](size_t size, uint64_t salt) {
    std::vector<int> pool = all;
    auto rng = make_rng(config.seed, salt);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(size);
    std::sort(pool.begin(), pool.end());
    return pool;
  };

  for (;;) {
    ++iteration;
    // One train/validation draw per step, shared by every depth.
    auto cand = search_clusters(s, {current}, pairs,
                                mix64(config.seed ^ (0xB1A5ull + iteration)),
                                false);
    bool success = cand && s.accepted(*cand);
    if (success) {
      InterpretResult r = found_result(
          *cand, double(current.size()) / double(pairs.size()), iteration);
      if (!best || r.perf_ratio > best->perf_ratio) best = r;
      if (removed == 0) break;  // first-shot success: nothing to re-add
      size_t add = (removed + 1) / 2;
      if (add <= size_t(config.patience)) break;  // size change within patience
      removed -= add;
      current = resample(current.size() + add, uint64_t(iteration));
      prev_success = true;
    } else {
      // A failure right after a success ends the search with the best
      // formula found so far.
      if (prev_success) break;
      size_t drop = current.size() / 2;
      if (drop <= size_t(config.patience) || drop == 0) break;
      auto rng = make_rng(config.seed, 0xD20Dull + uint64_t(iteration));
      std::shuffle(current.begin(), current.end(), rng);
      current.resize(current.size() - drop);
      std::sort(current.begin(), current.end());
      removed += drop;
    }
  }
  if (best) {
    best->iterations = iteration;
    return *best;
  }
  return no_solution("no subset produced a formula meeting the aspiration ratio",
                     iteration);
}

size_t count_imitated(const Formula& f, const DemonstrationSet& demo_set,
                      const PredicateSet& preds, const EnvironmentSpec& env) {
  FormulaPolicy policy(f, preds, env);
  size_t count = 0;
  for (const auto& p : demo_set.pairs()) {
    auto a = policy.accepted(p.belief, p.prev_click);
    if (p.action.is_click()) {
      if (std::find(a.begin(), a.end(), p.action) != a.end()) ++count;
    } else {
      if (a.empty()) ++count;
    }
  }
  return count;
}

}  // namespace mouselab
