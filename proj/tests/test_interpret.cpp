#include <set>

#include "doctest.h"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/env.hpp"
#include "mouselab/interpret.hpp"
#include "mouselab/solver.hpp"

using namespace mouselab;

namespace {

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

struct Fixture {
  EnvironmentSpec env = mini_env();
  PredicateSet preds = enumerate_predicates(small_grammar());
  ValueTable table{env};
  DemonstrationSet demos;
  InterpretConfig cfg;

  Fixture() {
    ExpertPolicy expert(table);
    demos = generate_demonstrations(env, expert, 32, 19);
    cfg.rollouts = 4000;
    cfg.clusters = 6;
    cfg.mean_expert_reward = table.value(0);
    cfg.seed = 7;
  }
};

}  // namespace

TEST_CASE("nonpositive expert reward is rejected") {
  Fixture f;
  f.cfg.mean_expert_reward = 0;
  CHECK_THROWS(ai_interpret(f.demos, f.preds, f.env, f.table, f.cfg));
  f.cfg.mean_expert_reward = -3;
  CHECK_THROWS(lpp_baseline(f.demos, f.preds, f.env, f.table, f.cfg));
}

TEST_CASE("negative examples from the value table are exactly the suboptimal clicks") {
  Fixture f;
  auto pairs = f.demos.pairs();
  auto negs = negative_examples_from_table(f.table, pairs);

  std::set<std::pair<Belief, int>> neg_set;
  for (const auto& n : negs) neg_set.insert({n.belief, n.action.v});
  std::set<std::pair<Belief, int>> pos_set;
  for (const auto& p : pairs) pos_set.insert({p.belief, p.action.v});
  for (const auto& key : neg_set) CHECK(!pos_set.count(key));

  // Cross-check membership against the optimal action set per belief.
  std::set<Belief> beliefs;
  for (const auto& p : pairs) beliefs.insert(p.belief);
  for (Belief b : beliefs) {
    auto opt = f.table.optimal_action_set(b);
    for (Computation c : f.env.available_computations(b)) {
      bool optimal = std::find(opt.begin(), opt.end(), c) != opt.end();
      if (c.is_click()) CHECK(neg_set.count({b, c.v}) == !optimal);
    }
  }
}

TEST_CASE("ai_interpret finds a high-value formula on the mini expert") {
  Fixture f;
  auto r = ai_interpret(f.demos, f.preds, f.env, f.table, f.cfg);
  REQUIRE(r.found);
  CHECK(r.perf_ratio >= f.cfg.alpha);
  CHECK(r.support_fraction > 0);
  CHECK(r.support_fraction <= 1.0);
  CHECK(r.iterations >= 1);

  // Deterministic in the config seed.
  auto r2 = ai_interpret(f.demos, f.preds, f.env, f.table, f.cfg);
  REQUIRE(r2.found);
  CHECK(r.formula.digest() == r2.formula.digest());
  CHECK(r.m_f == doctest::Approx(r2.m_f));
}

TEST_CASE("unreachable aspiration yields NoSolution with a reason") {
  Fixture f;
  f.cfg.alpha = 5.0;  // no formula can multiply the expert's return
  auto r = ai_interpret(f.demos, f.preds, f.env, f.table, f.cfg);
  CHECK(!r.found);
  CHECK(!r.reason.empty());
}

TEST_CASE("lpp_baseline reports full support and a valid ratio") {
  Fixture f;
  auto r = lpp_baseline(f.demos, f.preds, f.env, f.table, f.cfg);
  REQUIRE(r.found);
  CHECK(r.support_fraction == doctest::Approx(1.0));
  CHECK(r.perf_ratio >= 0.0);
  auto r2 = lpp_baseline(f.demos, f.preds, f.env, f.table, f.cfg);
  CHECK(r.formula.digest() == r2.formula.digest());
}

TEST_CASE("binary_interpret returns a deterministic accepted formula") {
  Fixture f;
  auto r = binary_interpret(f.demos, f.preds, f.env, f.table, f.cfg);
  auto r2 = binary_interpret(f.demos, f.preds, f.env, f.table, f.cfg);
  CHECK(r.found == r2.found);
  if (r.found) {
    CHECK(r.formula.digest() == r2.formula.digest());
    CHECK(r.perf_ratio >= f.cfg.alpha);
  }
}

TEST_CASE("count_imitated agrees with the formula policy") {
  Fixture f;
  Formula leaf = Formula::from_text("(!is_observed & has_largest_depth)", f.preds);
  size_t n = count_imitated(leaf, f.demos, f.preds, f.env);
  size_t manual = 0;
  FormulaPolicy policy(leaf, f.preds, f.env);
  for (const auto& p : f.demos.pairs()) {
    auto acc = policy.accepted(p.belief, p.prev_click);
    if (p.action.is_click())
      manual += std::find(acc.begin(), acc.end(), p.action) != acc.end();
    else
      manual += acc.empty();
  }
  CHECK(n == manual);
}
