#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mouselab/clustering.hpp"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/interpret.hpp"
#include "mouselab/lpp.hpp"

namespace mouselab {

// Question tree with "Click it"/"Don't click it" terminals.
struct FlowNode {
  int pred = -1;        // predicate index; -1 for terminals
  std::string text;     // English question / terminal label
  int yes = -1, no = -1;
  int terminal = -1;    // terminals: 1 = "Click it", 0 = "Don't click it"
};

struct FlowTree {
  std::vector<FlowNode> nodes;  // node 0 is the root
  size_t node_count = 0;        // question nodes only
  size_t depth = 0;             // questions along the longest path

  // Truth under an assignment of predicate values (index by predicate).
  bool classify(const std::vector<bool>& assignment) const;
};

FlowTree formula_to_tree(const Formula& formula, const PredicateSet& preds,
                         const EnvironmentSpec& env);

enum class RenderFormat { Dot, Ascii };
std::string render(const FlowTree& tree, RenderFormat format);
RenderFormat render_format_from_name(const std::string& name);

// Hand-coded executable versions of the published flowchart strategies.
// Only Increasing, Decreasing, and Constant have published flowcharts.
std::unique_ptr<Policy> reference_policy(EnvKind kind);

// Fraction of a trajectory's clicks consistent with the formula's policy,
// with a shortfall penalty when the trajectory clicks fewer times than the
// strategy's rounded mean click count (estimated over `simulations` rollouts).
double click_agreement(const Trajectory& trajectory, const Formula& formula,
                       const PredicateSet& preds, const EnvironmentSpec& env,
                       int simulations, uint64_t seed = 0);

struct PipelineConfig {
  int x = 64;              // demonstration count
  GrammarConfig grammar;
  InterpretConfig base;    // mean_expert_reward/clusters filled by discover
  int K = 4;
  std::vector<int> grid;   // elbow grid; default 2..30
  std::optional<int> clusters_override;

  PipelineConfig();
};

struct PipelineCandidate {
  int clusters = 0;        // N used
  Formula formula;
  FlowTree tree;
  double perf_ratio = 0;
};

struct CandidateSet {
  std::vector<PipelineCandidate> candidates;
  std::vector<std::string> diagnostics;        // NoSolution reasons etc.
  std::vector<std::pair<int, double>> elbow_curve;
  bool no_elbow = false;
  double mean_expert_reward = 0;
};

CandidateSet discover(EnvKind kind, const PipelineConfig& config);

// Fewest question nodes, ties by depth, then by canonical formula text.
const PipelineCandidate& select_tree(const CandidateSet& set,
                                     const PredicateSet& preds);

}  // namespace mouselab
