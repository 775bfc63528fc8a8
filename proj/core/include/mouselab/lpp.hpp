#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"

namespace mouselab {

struct Literal {
  int pred = 0;  // index into the active PredicateSet
  bool negated = false;
  auto operator<=>(const Literal&) const = default;
};

// DNF over predicate literals. Empty disjunct list = False; a formula is
// True iff it has one empty conjunction (after canonicalization).
struct Formula {
  std::vector<std::vector<Literal>> disjuncts;

  static Formula False() { return {}; }
  static Formula True() { return {{{}}}; }
  bool is_false() const { return disjuncts.empty(); }
  bool is_true() const;
  size_t literal_count() const;
  size_t distinct_predicates() const;

  // Sort/dedup literals and disjuncts, drop contradictory conjunctions.
  Formula canonical() const;
  uint64_t digest() const;       // stable digest of the canonical text
  std::string to_text(const PredicateSet& preds) const;
  static Formula from_text(const std::string& text, const PredicateSet& preds);

  bool accepts(const PredicateSet& preds, const EvalContext& ctx,
               Computation click) const;
  // Truth under an arbitrary assignment of predicate values (for
  // equivalence checks against decision trees).
  bool eval_assignment(const std::vector<bool>& assignment) const;
};

// Binary decision tree over predicate columns.
struct TreeNode {
  int pred = -1;       // -1 for leaves
  int lo = -1, hi = -1;
  int label = -1;      // leaves: 0 negative, 1 positive
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root (empty = trivial negative)
  int depth = 0;

  bool classify(const std::vector<bool>& assignment) const;
};

// Greedy CART on Gini impurity. Ties broken by lowest column index; leaves
// labeled by majority, ties negative; each path tests a predicate once.
DecisionTree induce_tree(const BinaryMatrix& features,
                         const std::vector<bool>& labels, int max_depth);

// Conjunctions along root-to-positive-leaf paths.
Formula extract_dnf(const DecisionTree& tree);

// Stochastic policy: uniform over accepted unobserved clicks, terminate when
// none is accepted.
class FormulaPolicy : public Policy {
 public:
  FormulaPolicy(Formula f, const PredicateSet& preds, const EnvironmentSpec& env)
      : formula_(f.canonical()), preds_(&preds), env_(&env) {}
  Computation act(Belief b, int prev_click, std::mt19937_64& rng) override;
  // Clicks the formula accepts at (b, prev_click).
  std::vector<Computation> accepted(Belief b, int prev_click) const;

 private:
  Formula formula_;
  const PredicateSet* preds_;
  const EnvironmentSpec* env_;
};

// Log-likelihood of demonstration pairs under the formula's policy. A click
// pair contributes log(1/|A(b)|) if accepted, -inf otherwise; a terminate
// pair contributes 0 if A(b) is empty, -inf otherwise.
double demo_log_likelihood(const Formula& f, const std::vector<DemoPair>& pairs,
                           const PredicateSet& preds, const EnvironmentSpec& env);

// Log prior: -lambda * literal_count.
double formula_log_prior(const Formula& f, double lambda = 1.0);

struct LppResult {
  std::optional<Formula> formula;  // nullopt = no formula (False or 0 likelihood)
  double log_posterior = -1e18;    // log prior + validation log likelihood
  double log_likelihood = -1e18;
};

// Induce a tree from train pairs + negatives, extract the DNF, and score it
// on the validation pairs (MAP objective).
LppResult lpp_map(const std::vector<DemoPair>& train_pairs,
                  const std::vector<DemoPair>& validation_pairs,
                  const std::vector<NegativeExample>& negatives,
                  const PredicateSet& preds, const EnvironmentSpec& env,
                  int max_depth, double lambda = 1.0,
                  FeatureCache* cache = nullptr);

struct FormulaStats {
  size_t distinct_predicates = 0;
  size_t literal_count = 0;
  size_t equivalent_tree_nodes = 0;  // question nodes of the rendered flow tree
  size_t depth = 0;                  // longest conjunction
};
FormulaStats formula_stats(const Formula& f);  // implemented with the flow module

}  // namespace mouselab
