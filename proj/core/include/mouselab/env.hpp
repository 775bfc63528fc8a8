#pragma once
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mouselab {

// A metalevel action: click a node to reveal its value, or terminate and
// collect the best expected path.
struct Computation {
  int v = -1;  // -1 = terminate, otherwise node id (1-based)
  static Computation click(int node) { return Computation{node}; }
  static Computation terminate() { return Computation{-1}; }
  bool is_click() const { return v >= 0; }
  int node() const { return v; }
  auto operator<=>(const Computation&) const = default;
};

// Belief state: one nibble per node. Code 0 = unobserved, code k>0 = the
// k-th value of that node's level support. Node 1 occupies the most
// significant used nibble so that numeric order on the packed word equals
// lexicographic order on the (node 1, node 2, ...) code sequence.
using Belief = uint64_t;

enum class EnvKind { Increasing, Decreasing, Constant, Different, Custom };

std::string env_kind_name(EnvKind k);
EnvKind env_kind_from_name(const std::string& name);

// Tree layout. Branches are interchangeable within a symmetry group; the
// last two nodes of a branch (if `leaf_pair`) are interchangeable siblings.
struct TreeStructure {
  int node_count = 0;
  std::vector<std::vector<int>> branches;  // node ids root-child first
  bool leaf_pairs = false;                  // last two branch nodes are swappable siblings
  std::vector<std::vector<int>> paths;      // root-to-leaf node id sequences
  std::vector<int> level;                   // level[node], 1-based nodes, level 1 = root child
  std::vector<int> parent;                  // parent[node], 0 = root
  std::vector<std::vector<int>> children;   // children[node] (node 0 = root)
  std::vector<int> branch_of;               // branch index per node
  std::vector<std::vector<int>> dist;       // pairwise edge distance incl. root (index 0)

  int shift(int node) const { return (node_count - node) * 4; }
  int code(Belief b, int node) const { return int((b >> shift(node)) & 0xf); }
  Belief with_code(Belief b, int node, int c) const {
    return (b & ~(Belief(0xf) << shift(node))) | (Belief(c) << shift(node));
  }
  int max_level() const;
};

TreeStructure make_312_tree();
TreeStructure make_112_tree();        // one branch: root child, inner, two leaves
TreeStructure make_single_node_tree();

struct EnvironmentSpec {
  EnvKind kind = EnvKind::Custom;
  TreeStructure tree;
  std::vector<std::vector<int>> support;  // support[level-1], ascending
  double click_cost = 1.0;

  const std::vector<int>& support_of(int node) const {
    return support[tree.level[node] - 1];
  }
  int value_code(Belief b, int node) const {  // revealed value, 0 if unobserved
    int c = tree.code(b, node);
    return c == 0 ? 0 : support_of(node)[c - 1];
  }
  bool observed(Belief b, int node) const { return tree.code(b, node) != 0; }
  int observed_count(Belief b) const;
  int global_max() const;  // largest value over all supports
  int global_min() const;
  int level_max(int level) const { return support[level - 1].back(); }
  std::vector<Computation> available_computations(Belief b) const;
  std::string fingerprint() const;  // identifies tree+supports for cache files
};

EnvironmentSpec make_environment(EnvKind kind);

// Ground truth: the hidden value of every node for one episode.
using GroundTruth = std::vector<int>;  // index by node id; [0] unused

GroundTruth sample_ground_truth(const EnvironmentSpec& env, std::mt19937_64& rng);

// Expected payoff of the best root-to-leaf path (unobserved nodes count 0).
double termination_reward(const EnvironmentSpec& env, Belief b);

// Deterministic transition given the ground truth.
struct StepResult {
  Belief belief;
  double reward;
  bool done;
};
StepResult apply_computation(const EnvironmentSpec& env, Belief b,
                             Computation c, const GroundTruth& gt);

// All successor beliefs of clicking `node`, each with probability
// 1/|support|.
std::vector<Belief> click_outcomes(const EnvironmentSpec& env, Belief b, int node);

// Representative of the symmetry orbit of b (branch permutations x sibling
// leaf swaps); equals the numerically smallest belief in the orbit.
Belief canonicalize(const EnvironmentSpec& env, Belief b);

// All images of b under the symmetry group (with repeats when b is
// symmetric); for testing canonicalize.
std::vector<Belief> symmetry_images(const EnvironmentSpec& env, Belief b);

}  // namespace mouselab
