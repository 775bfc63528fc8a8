#include <random>

#include "doctest.h"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/env.hpp"
#include "mouselab/flow.hpp"
#include "mouselab/lpp.hpp"

using namespace mouselab;

namespace {

GrammarConfig small_grammar() {
  GrammarConfig g;
  g.base = {"is_observed", "has_largest_depth", "is_root_child"};
  g.general = {"no_click_made_yet"};
  g.among = {"has_largest_depth"};
  g.among_width = 1;
  g.among_with_width = 1;
  return g;
}

std::vector<std::vector<bool>> all_assignments(size_t k) {
  std::vector<std::vector<bool>> out;
  for (size_t m = 0; m < (size_t(1) << k); ++m) {
    std::vector<bool> a(k);
    for (size_t i = 0; i < k; ++i) a[i] = (m >> i) & 1;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

TEST_CASE("formula_to_tree is logically equivalent to the formula") {
  auto env = make_environment(EnvKind::Increasing);
  auto preds = enumerate_predicates(small_grammar());
  size_t k = 4;  // restrict literals to the first 4 predicates
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 80; ++trial) {
    Formula f;
    size_t nd = rng() % 4;
    for (size_t d = 0; d < nd; ++d) {
      std::vector<Literal> conj;
      size_t nl = 1 + rng() % 3;
      for (size_t l = 0; l < nl; ++l)
        conj.push_back({int(rng() % k), bool(rng() & 1)});
      f.disjuncts.push_back(conj);
    }
    FlowTree tree = formula_to_tree(f, preds, env);
    Formula canon = f.canonical();
    for (const auto& a : all_assignments(k))
      CHECK(tree.classify(a) == canon.eval_assignment(a));
  }
}

TEST_CASE("trivial formulas render as a single terminal") {
  auto env = make_environment(EnvKind::Increasing);
  auto preds = enumerate_predicates(small_grammar());

  FlowTree no = formula_to_tree(Formula::False(), preds, env);
  CHECK(no.node_count == 0);
  REQUIRE(no.nodes.size() == 1);
  CHECK(no.nodes[0].terminal == 0);
  CHECK(no.nodes[0].text == "Don't click it");

  FlowTree yes = formula_to_tree(Formula::True(), preds, env);
  CHECK(yes.node_count == 0);
  CHECK(yes.nodes[0].terminal == 1);
  CHECK(yes.nodes[0].text == "Click it");
}

TEST_CASE("render emits DOT and ASCII with question and terminal labels") {
  auto env = make_environment(EnvKind::Decreasing);
  auto preds = enumerate_predicates(small_grammar());
  Formula f = Formula::from_text("(!is_observed & is_root_child)", preds);
  FlowTree tree = formula_to_tree(f, preds, env);
  CHECK(tree.node_count == 2);

  std::string dot = render(tree, RenderFormat::Dot);
  CHECK(dot.find("digraph") != std::string::npos);
  bool has_yes_edge = dot.find("\"yes\"") != std::string::npos ||
                      dot.find("label=\"yes\"") != std::string::npos;
  CHECK(has_yes_edge);
  CHECK(dot.find("Click it") != std::string::npos);
  CHECK(dot.find("Don't click it") != std::string::npos);
  CHECK(dot.find("Is it unobserved?") != std::string::npos);

  std::string ascii = render(tree, RenderFormat::Ascii);
  CHECK(ascii.find("yes:") != std::string::npos);
  CHECK(ascii.find("no:") != std::string::npos);
  CHECK(render(tree, RenderFormat::Dot) == dot);  // deterministic

  CHECK(render_format_from_name("dot") == RenderFormat::Dot);
  CHECK(render_format_from_name("ascii") == RenderFormat::Ascii);
  CHECK_THROWS(render_format_from_name("svg"));
}

TEST_CASE("select_tree prefers fewer questions, then shallower, then text") {
  auto env = make_environment(EnvKind::Increasing);
  auto preds = enumerate_predicates(small_grammar());

  auto mk = [&](const std::string& text) {
    PipelineCandidate c;
    c.formula = Formula::from_text(text, preds);
    c.tree = formula_to_tree(c.formula, preds, env);
    return c;
  };
  CandidateSet set;
  set.candidates.push_back(mk("(!is_observed & has_largest_depth)"));  // 2 nodes
  set.candidates.push_back(mk("(has_largest_depth)"));                 // 1 node
  set.candidates.push_back(mk("(is_root_child)"));                     // 1 node
  const auto& best = select_tree(set, preds);
  CHECK(best.tree.node_count == 1);
  // 1-node tie broken by canonical text: "(has_largest_depth)" < "(is_root_child)".
  CHECK(best.formula.to_text(preds) == "(has_largest_depth)");
}

TEST_CASE("formula_stats counts questions of the equivalent tree") {
  auto preds = enumerate_predicates(small_grammar());
  Formula f = Formula::from_text(
      "(!is_observed & has_largest_depth) | (is_root_child)", preds);
  FormulaStats s = formula_stats(f);
  CHECK(s.literal_count == 3);
  CHECK(s.distinct_predicates == 3);
  CHECK(s.depth == 2);
  auto env = make_environment(EnvKind::Increasing);
  CHECK(s.equivalent_tree_nodes ==
        formula_to_tree(f, preds, env).node_count);
}

TEST_CASE("reference policies exist for the three published environments") {
  for (EnvKind k : {EnvKind::Increasing, EnvKind::Decreasing, EnvKind::Constant}) {
    auto env = make_environment(k);
    auto policy = reference_policy(k);
    REQUIRE(policy != nullptr);
    double m = estimate_mean_return(env, *policy, 2000, 1);
    CHECK(m > 0);
  }
  CHECK_THROWS(reference_policy(EnvKind::Different));
}

TEST_CASE("click agreement arithmetic") {
  auto env = make_environment(EnvKind::Increasing);
  auto preds = enumerate_predicates(small_grammar());

  // A trajectory whose clicks are all leaves, against the leaf-only rule.
  GroundTruth gt(13, 0);
  for (int n = 1; n <= 12; ++n) gt[n] = env.support_of(n)[3];
  Trajectory t;
  Belief b = 0;
  int prev = -1;
  for (int leaf : {7, 9, 11}) {
    t.steps.push_back({b, Computation::click(leaf), prev});
    b = apply_computation(env, b, Computation::click(leaf), gt).belief;
    prev = leaf;
  }
  t.steps.push_back({b, Computation::terminate(), prev});

  Formula leaf_rule = Formula::from_text("(!is_observed & has_largest_depth)", preds);
  double a = click_agreement(t, leaf_rule, preds, env, 500, 3);
  CHECK(a > 0.0);
  CHECK(a <= 1.0);
  CHECK(a == click_agreement(t, leaf_rule, preds, env, 500, 3));  // deterministic

  // A rule that accepts nothing: no click can be consistent.
  CHECK(click_agreement(t, Formula::False(), preds, env, 500, 3) == 0.0);
}

TEST_CASE("pipeline config defaults") {
  PipelineConfig cfg;
  CHECK(cfg.x == 64);
  CHECK(cfg.K == 4);
  REQUIRE(!cfg.grid.empty());
  CHECK(cfg.grid.front() == 2);
  CHECK(cfg.grid.back() == 30);
  CHECK(!cfg.clusters_override.has_value());
}
