#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mouselab/clustering.hpp"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/lpp.hpp"
#include "mouselab/solver.hpp"

namespace mouselab {

struct InterpretConfig {
  double alpha = 0.7;        // aspiration return ratio
  double delta = 0.025;      // tolerance for the candidate filter
  int rollouts = 100000;     // L
  int max_depth = 5;         // d (longest conjunction / tree depth)
  int clusters = 18;         // N
  double cut_size = 0.025;   // X, minimum representative cluster fraction
  double split = 0.7;        // S, train fraction
  double mean_expert_reward = 0;  // m = max_c Q(b0, c)
  // Sub-optimality margin for negative examples: a click is a negative only
  // if its Q value trails the best by more than this (half a click cost).
  // Clicks within the margin are near-optimal and excluded, so that noise in
  // which co-optimal click the expert happened to take does not poison the
  // rule induction. The expert itself always uses the exact solver ties.
  double tie_epsilon = 0.5;
  int patience = 8;          // Binary-Interpret stop slack
  uint64_t seed = 0;
  double lambda = 1.0;       // formula prior weight
  // Step 17 acceptance: the pseudocode tests ratio >= alpha; the prose says
  // alpha - delta. Default follows the pseudocode.
  bool accept_alpha_minus_delta = false;
  bool geometric_likelihood = true;
};

struct InterpretResult {
  bool found = false;
  Formula formula;
  double m_f = 0;
  double perf_ratio = 0;
  double support_fraction = 0;  // |D̂|/|D| at the accepting iteration
  int iterations = 0;
  std::string reason;  // set when !found
};

// Computations that are suboptimal at the demonstrated beliefs, judged by
// the exact value table.
std::vector<NegativeExample> negative_examples_from_table(
    ValueTable& table, const std::vector<DemoPair>& pairs, double tie_eps = 1e-9);

InterpretResult ai_interpret(const DemonstrationSet& demo_set,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env, ValueTable& table,
                             const InterpretConfig& config);

InterpretResult binary_interpret(const DemonstrationSet& demo_set,
                                 const PredicateSet& preds,
                                 const EnvironmentSpec& env, ValueTable& table,
                                 const InterpretConfig& config);

InterpretResult lpp_baseline(const DemonstrationSet& demo_set,
                             const PredicateSet& preds,
                             const EnvironmentSpec& env, ValueTable& table,
                             const InterpretConfig& config);

// Number of (belief, action) pairs the formula's induced policy can imitate:
// clicks it accepts, and terminations where it accepts nothing.
size_t count_imitated(const Formula& f, const DemonstrationSet& demo_set,
                      const PredicateSet& preds, const EnvironmentSpec& env);

}  // namespace mouselab
