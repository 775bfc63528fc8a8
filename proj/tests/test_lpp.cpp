#include <cmath>
#include <random>

#include "doctest.h"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/env.hpp"
#include "mouselab/lpp.hpp"
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

// All 2^k assignments over k predicate slots.
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

TEST_CASE("formula canonicalization") {
  // (p1 & p0) | (p0 & p1) | (p2 & !p2) canonicalizes to a single sorted
  // disjunct; the contradictory one is dropped.
  Formula f;
  f.disjuncts = {{{1, false}, {0, false}},
                 {{0, false}, {1, false}},
                 {{2, false}, {2, true}}};
  Formula c = f.canonical();
  REQUIRE(c.disjuncts.size() == 1);
  CHECK(c.disjuncts[0] == std::vector<Literal>{{0, false}, {1, false}});
  CHECK(c.literal_count() == 2);
  CHECK(c.distinct_predicates() == 2);

  CHECK(Formula::False().is_false());
  CHECK(Formula::True().is_true());
  CHECK(Formula::True().literal_count() == 0);
}

TEST_CASE("formula digests track logical content") {
  Formula a;
  a.disjuncts = {{{1, false}, {0, false}}};
  Formula b;
  b.disjuncts = {{{0, false}, {1, false}}};
  Formula c;
  c.disjuncts = {{{0, false}, {1, true}}};
  CHECK(a.digest() == b.digest());
  CHECK(a.digest() != c.digest());
  CHECK(Formula::True().digest() != Formula::False().digest());
}

TEST_CASE("formula text round-trips") {
  auto preds = enumerate_predicates(small_grammar());
  for (const char* text : {
           "(is_observed)",
           "(!is_observed & has_largest_depth)",
           "(is_root_child) | (!has_largest_depth & no_click_made_yet)",
           "(among(!is_observed & has_largest_depth))",
           "true",
           "false",
       }) {
    Formula f = Formula::from_text(text, preds);
    CHECK(f.to_text(preds) == text);
  }
}

TEST_CASE("eval_assignment follows DNF semantics") {
  Formula f;
  f.disjuncts = {{{0, false}, {1, true}}, {{2, false}}};
  CHECK(f.eval_assignment({true, false, false}));
  CHECK(!f.eval_assignment({true, true, false}));
  CHECK(f.eval_assignment({false, true, true}));
  CHECK(!Formula::False().eval_assignment({true, true, true}));
  CHECK(Formula::True().eval_assignment({false, false, false}));
}

TEST_CASE("extract_dnf is logically equivalent to its tree") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    size_t k = 2 + trial % 5;  // 2..6 predicates
    size_t rows = 8 + rng() % 60;
    BinaryMatrix m(rows, k);
    std::vector<bool> labels(rows);
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < k; ++c) m.set(r, c, rng() & 1);
      labels[r] = rng() & 1;
    }
    int depth = 1 + int(rng() % k);
    DecisionTree tree = induce_tree(m, labels, depth);
    Formula dnf = extract_dnf(tree);
    for (const auto& a : all_assignments(k))
      CHECK(tree.classify(a) == dnf.eval_assignment(a));
  }
}

TEST_CASE("depth-1 tree on XOR labels falls back to all-negative") {
  BinaryMatrix m(4, 2);
  std::vector<bool> labels(4);
  for (size_t r = 0; r < 4; ++r) {
    bool a = r & 1, b = (r >> 1) & 1;
    m.set(r, 0, a);
    m.set(r, 1, b);
    labels[r] = a != b;
  }
  DecisionTree tree = induce_tree(m, labels, 1);
  // No single split has positive Gini gain; majority ties resolve negative.
  for (const auto& a : all_assignments(2)) CHECK(!tree.classify(a));
  CHECK(extract_dnf(tree).is_false());

  // Depth 2 separates XOR exactly.
  DecisionTree deep = induce_tree(m, labels, 2);
  Formula dnf = extract_dnf(deep);
  for (size_t r = 0; r < 4; ++r) {
    std::vector<bool> a = {m.get(r, 0), m.get(r, 1)};
    CHECK(deep.classify(a) == labels[r]);
    CHECK(dnf.eval_assignment(a) == labels[r]);
  }
}

TEST_CASE("demo log likelihood arithmetic") {
  auto env = mini_env();
  auto preds = enumerate_predicates(small_grammar());
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 8, 21);
  auto pairs = demos.pairs();

  // True accepts every unobserved click: each click pair contributes
  // log(1/|unobserved|); terminate pairs contribute -inf (the set is
  // nonempty before full observation).
  double manual = 0;
  bool had_terminate_with_clicks_left = false;
  for (const auto& p : pairs) {
    size_t avail = env.available_computations(p.belief).size() - 1;
    if (p.action.is_click()) manual += std::log(1.0 / double(avail));
    else if (avail > 0) had_terminate_with_clicks_left = true;
  }
  double ll = demo_log_likelihood(Formula::True(), pairs, preds, env);
  if (had_terminate_with_clicks_left) CHECK(ll < -1e17);
  else CHECK(ll == doctest::Approx(manual));

  // Click-only pairs under True: exactly the manual sum.
  auto clicks = demos.click_pairs();
  CHECK(demo_log_likelihood(Formula::True(), clicks, preds, env) ==
        doctest::Approx(manual));

  // False rejects every click but accepts all terminations.
  CHECK(demo_log_likelihood(Formula::False(), clicks, preds, env) < -1e17);
}

TEST_CASE("formula log prior penalizes literals") {
  Formula f;
  f.disjuncts = {{{0, false}, {1, false}}, {{2, true}}};
  CHECK(formula_log_prior(f, 1.0) == doctest::Approx(-3.0));
  CHECK(formula_log_prior(f, 2.5) == doctest::Approx(-7.5));
  CHECK(formula_log_prior(Formula::True(), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("formula policy acts only on accepted unobserved clicks") {
  auto env = mini_env();
  auto preds = enumerate_predicates(small_grammar());
  Formula leaf_only =
      Formula::from_text("(!is_observed & has_largest_depth)", preds);
  FormulaPolicy policy(leaf_only, preds, env);

  auto accepted = policy.accepted(0, -1);
  REQUIRE(accepted.size() == 2);  // mini tree has two leaves: nodes 3, 4
  CHECK(accepted[0].node() == 3);
  CHECK(accepted[1].node() == 4);

  Belief both = env.tree.with_code(env.tree.with_code(0, 3, 1), 4, 1);
  CHECK(policy.accepted(both, 4).empty());
  std::mt19937_64 rng(5);
  CHECK(!policy.act(both, 4, rng).is_click());  // terminates when nothing accepted
}

TEST_CASE("lpp_map recovers the expert's leaf-first rule on the mini tree") {
  auto env = mini_env();
  auto preds = enumerate_predicates(small_grammar());
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 40, 77);
  auto clicks = demos.click_pairs();
  auto negs = negative_examples(env, demos.pairs());

  LppResult r = lpp_map(clicks, clicks, negs, preds, env, 3);
  REQUIRE(r.formula.has_value());
  CHECK(r.log_likelihood > -1e17);
  CHECK(r.log_posterior ==
        doctest::Approx(r.log_likelihood + formula_log_prior(*r.formula)));
  // The learned rule must reproduce the expert clicks it was trained on.
  FormulaPolicy policy(*r.formula, preds, env);
  for (const auto& p : clicks) {
    auto acc = policy.accepted(p.belief, p.prev_click);
    CHECK(std::find(acc.begin(), acc.end(), p.action) != acc.end());
  }
}
