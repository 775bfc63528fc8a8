#include "mouselab/env.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mouselab {

std::string env_kind_name(EnvKind k) {
  switch (k) {
    case EnvKind::Increasing: return "increasing";
    case EnvKind::Decreasing: return "decreasing";
    case EnvKind::Constant: return "constant";
    case EnvKind::Different: return "different";
    case EnvKind::Custom: return "custom";
  }
  return "custom";
}

EnvKind env_kind_from_name(const std::string& name) {
  if (name == "increasing") return EnvKind::Increasing;
  if (name == "decreasing") return EnvKind::Decreasing;
  if (name == "constant") return EnvKind::Constant;
  if (name == "different") return EnvKind::Different;
  if (name == "custom") return EnvKind::Custom;
  throw std::invalid_argument("unknown environment kind: " + name);
}

int TreeStructure::max_level() const {
  int m = 0;
  for (size_t n = 1; n < level.size(); ++n) m = std::max(m, level[n]);
  return m;
}

static void finish_tree(TreeStructure& t) {
  t.children.assign(t.node_count + 1, {});
  for (int n = 1; n <= t.node_count; ++n) t.children[t.parent[n]].push_back(n);
  t.branch_of.assign(t.node_count + 1, -1);
  for (size_t bi = 0; bi < t.branches.size(); ++bi)
    for (int n : t.branches[bi]) t.branch_of[n] = int(bi);
  // BFS pairwise distances over the rooted tree (node 0 = root).
  int n = t.node_count;
  t.dist.assign(n + 1, std::vector<int>(n + 1, 0));
  for (int s = 0; s <= n; ++s) {
    std::vector<int> d(n + 1, -1);
    std::vector<int> q{s};
    d[s] = 0;
    for (size_t head = 0; head < q.size(); ++head) {
      int u = q[head];
      auto visit = [&](int v) {
        if (v >= 0 && d[v] < 0) { d[v] = d[u] + 1; q.push_back(v); }
      };
      if (u > 0) visit(t.parent[u]);
      for (int c : t.children[u]) visit(c);
    }
    t.dist[s] = d;
  }
}

TreeStructure make_312_tree() {
  TreeStructure t;
  t.node_count = 12;
  t.branches = {{1, 4, 7, 8}, {2, 5, 9, 10}, {3, 6, 11, 12}};
  t.leaf_pairs = true;
  t.paths = {{1, 4, 7}, {1, 4, 8}, {2, 5, 9}, {2, 5, 10}, {3, 6, 11}, {3, 6, 12}};
  t.level = {0, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 3, 3};
  t.parent = {0, 0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 6, 6};
  finish_tree(t);
  return t;
}

TreeStructure make_112_tree() {
  TreeStructure t;
  t.node_count = 4;
  t.branches = {{1, 2, 3, 4}};
  t.leaf_pairs = true;
  t.paths = {{1, 2, 3}, {1, 2, 4}};
  t.level = {0, 1, 2, 3, 3};
  t.parent = {0, 0, 1, 2, 2};
  finish_tree(t);
  return t;
}

TreeStructure make_single_node_tree() {
  TreeStructure t;
  t.node_count = 1;
  t.branches = {{1}};
  t.leaf_pairs = false;
  t.paths = {{1}};
  t.level = {0, 1};
  t.parent = {0, 0};
  finish_tree(t);
  return t;
}

int EnvironmentSpec::observed_count(Belief b) const {
  int c = 0;
  for (int n = 1; n <= tree.node_count; ++n) c += observed(b, n);
  return c;
}

int EnvironmentSpec::global_max() const {
  int m = support[0].back();
  for (const auto& s : support) m = std::max(m, s.back());
  return m;
}

int EnvironmentSpec::global_min() const {
  int m = support[0].front();
  for (const auto& s : support) m = std::min(m, s.front());
  return m;
}

std::vector<Computation> EnvironmentSpec::available_computations(Belief b) const {
  std::vector<Computation> out;
  out.push_back(Computation::terminate());
  for (int n = 1; n <= tree.node_count; ++n)
    if (!observed(b, n)) out.push_back(Computation::click(n));
  return out;
}

std::string EnvironmentSpec::fingerprint() const {
  std::ostringstream os;
  os << env_kind_name(kind) << "|n=" << tree.node_count << "|cost=" << click_cost << "|";
  for (const auto& br : tree.branches) {
    for (int n : br) os << n << ",";
    os << ";";
  }
  os << "|";
  for (const auto& s : support) {
    for (int v : s) os << v << ",";
    os << ";";
  }
  return os.str();
}

EnvironmentSpec make_environment(EnvKind kind) {
  EnvironmentSpec env;
  env.kind = kind;
  env.tree = make_312_tree();
  switch (kind) {
    case EnvKind::Increasing:
      env.support = {{-4, -2, 2, 4}, {-8, -4, 4, 8}, {-48, -24, 24, 48}};
      break;
    case EnvKind::Decreasing:
      env.support = {{-48, -24, 24, 48}, {-8, -4, 4, 8}, {-4, -2, 2, 4}};
      break;
    case EnvKind::Constant:
      env.support = {{-10, -5, 5, 10}, {-10, -5, 5, 10}, {-10, -5, 5, 10}};
      break;
    case EnvKind::Different:
      env.support = {{-2, -1, 1, 2}, {-10, -5, 5, 10}, {-20, -10, 10, 20}};
      break;
    case EnvKind::Custom:
      throw std::invalid_argument("custom environments must be built explicitly");
  }
  return env;
}

GroundTruth sample_ground_truth(const EnvironmentSpec& env, std::mt19937_64& rng) {
  GroundTruth gt(env.tree.node_count + 1, 0);
  for (int n = 1; n <= env.tree.node_count; ++n) {
    const auto& s = env.support_of(n);
    gt[n] = s[std::uniform_int_distribution<size_t>(0, s.size() - 1)(rng)];
  }
  return gt;
}

double termination_reward(const EnvironmentSpec& env, Belief b) {
  double best = -1e18;
  for (const auto& path : env.tree.paths) {
    double s = 0;
    for (int n : path) s += env.value_code(b, n);
    best = std::max(best, s);
  }
  return best;
}

StepResult apply_computation(const EnvironmentSpec& env, Belief b,
                             Computation c, const GroundTruth& gt) {
  if (!c.is_click()) return {b, termination_reward(env, b), true};
  int node = c.node();
  if (env.observed(b, node)) throw std::invalid_argument("node already observed");
  const auto& s = env.support_of(node);
  auto it = std::find(s.begin(), s.end(), gt[node]);
  if (it == s.end()) throw std::invalid_argument("ground truth off support");
  Belief nb = env.tree.with_code(b, node, int(it - s.begin()) + 1);
  return {nb, -env.click_cost, false};
}

std::vector<Belief> click_outcomes(const EnvironmentSpec& env, Belief b, int node) {
  const auto& s = env.support_of(node);
  std::vector<Belief> out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    out.push_back(env.tree.with_code(b, node, int(i) + 1));
  return out;
}

Belief canonicalize(const EnvironmentSpec& env, Belief b) {
  const TreeStructure& t = env.tree;
  size_t nb = t.branches.size();
  size_t blen = t.branches[0].size();
  // Extract per-branch code tuples, normalizing the sibling leaf pair.
  // A branch tuple compares like the branch's nibble sequence, so sorting
  // tuples ascending yields the numerically smallest belief in the orbit.
  std::vector<std::array<int, 8>> keys(nb);
  for (size_t bi = 0; bi < nb; ++bi) {
    auto& k = keys[bi];
    k.fill(0);
    for (size_t j = 0; j < blen; ++j) k[j] = t.code(b, t.branches[bi][j]);
    if (t.leaf_pairs && blen >= 2 && k[blen - 2] > k[blen - 1])
      std::swap(k[blen - 2], k[blen - 1]);
  }
  std::sort(keys.begin(), keys.end());
  Belief out = 0;
  for (size_t bi = 0; bi < nb; ++bi)
    for (size_t j = 0; j < blen; ++j)
      out = t.with_code(out, t.branches[bi][j], keys[bi][j]);
  return out;
}

std::vector<Belief> symmetry_images(const EnvironmentSpec& env, Belief b) {
  const TreeStructure& t = env.tree;
  size_t nb = t.branches.size();
  size_t blen = t.branches[0].size();
  std::vector<int> perm(nb);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Belief> images;
  do {
    size_t flips = t.leaf_pairs ? (size_t(1) << nb) : 1;
    for (size_t mask = 0; mask < flips; ++mask) {
      Belief img = 0;
      for (size_t bi = 0; bi < nb; ++bi) {
        const auto& src = t.branches[perm[bi]];
        const auto& dst = t.branches[bi];
        std::vector<int> codes;
        for (int n : src) codes.push_back(t.code(b, n));
        if (t.leaf_pairs && (mask >> bi & 1) && blen >= 2)
          std::swap(codes[blen - 2], codes[blen - 1]);
        for (size_t j = 0; j < blen; ++j) img = t.with_code(img, dst[j], codes[j]);
      }
      images.push_back(img);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return images;
}

}  // namespace mouselab
