#include <set>

#include "doctest.h"
#include "mouselab/demos.hpp"
#include "mouselab/env.hpp"
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

struct TerminatePolicy : Policy {
  Computation act(Belief, int, std::mt19937_64&) override {
    return Computation::terminate();
  }
};

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
  if (a.payoff != b.payoff || a.steps.size() != b.steps.size()) return false;
  for (size_t i = 0; i < a.steps.size(); ++i) {
    if (a.steps[i].belief != b.steps[i].belief) return false;
    if (a.steps[i].action != b.steps[i].action) return false;
    if (a.steps[i].prev_click != b.steps[i].prev_click) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("demonstrations are deterministic in the seed") {
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto a = generate_demonstrations(env, expert, 16, 42);
  auto b = generate_demonstrations(env, expert, 16, 42);
  auto c = generate_demonstrations(env, expert, 16, 43);
  REQUIRE(a.trajectories.size() == 16);
  for (size_t i = 0; i < 16; ++i)
    CHECK(same_trajectory(a.trajectories[i], b.trajectories[i]));
  bool any_differ = false;
  for (size_t i = 0; i < 16; ++i)
    any_differ = any_differ || !same_trajectory(a.trajectories[i], c.trajectories[i]);
  CHECK(any_differ);
}

TEST_CASE("trajectory prefixes are substream-stable") {
  // Trajectory i does not depend on how many random draws earlier
  // trajectories consumed: the first 4 of a 16-set equal a 4-set.
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto big = generate_demonstrations(env, expert, 16, 42);
  auto small = generate_demonstrations(env, expert, 4, 42);
  for (size_t i = 0; i < 4; ++i)
    CHECK(same_trajectory(big.trajectories[i], small.trajectories[i]));
}

TEST_CASE("trajectory invariants") {
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 32, 5);
  for (const auto& t : demos.trajectories) {
    REQUIRE(!t.steps.empty());
    CHECK(!t.steps.back().action.is_click());
    CHECK(t.steps.front().prev_click == -1);
    for (size_t i = 0; i + 1 < t.steps.size(); ++i) {
      const auto& s = t.steps[i];
      CHECK(s.action.is_click());
      // Observations only accumulate.
      CHECK(env.observed_count(t.steps[i + 1].belief) ==
            env.observed_count(s.belief) + 1);
      CHECK(t.steps[i + 1].prev_click == s.action.node());
    }
  }
  auto all = demos.pairs();
  auto clicks = demos.click_pairs();
  CHECK(all.size() == clicks.size() + demos.trajectories.size());
  for (const auto& p : clicks) CHECK(p.action.is_click());
}

TEST_CASE("expert demonstrations only take optimal actions") {
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 32, 9);
  for (const auto& p : demos.pairs()) {
    auto opt = table.optimal_action_set(p.belief);
    CHECK(std::find(opt.begin(), opt.end(), p.action) != opt.end());
  }
}

TEST_CASE("negative examples are the untaken computations") {
  auto env = mini_env();
  ValueTable table(env);
  ExpertPolicy expert(table);
  auto demos = generate_demonstrations(env, expert, 16, 3);
  auto pairs = demos.pairs();
  auto negs = negative_examples(env, pairs);
  std::set<std::pair<Belief, int>> positive;
  for (const auto& p : pairs) positive.insert({p.belief, p.action.v});
  for (const auto& n : negs) {
    CHECK(!positive.count({n.belief, n.action.v}));
    if (n.action.is_click()) CHECK(!env.observed(n.belief, n.action.node()));
  }
}

TEST_CASE("estimate_mean_return") {
  auto env = mini_env();
  TerminatePolicy stop;
  CHECK(estimate_mean_return(env, stop, 100, 1) == doctest::Approx(0.0));

  ValueTable table(env);
  ExpertPolicy expert(table);
  double v0 = table.value(0);
  double m = estimate_mean_return(env, expert, 20000, 17);
  CHECK(m == doctest::Approx(v0).epsilon(0.05));
  // Deterministic in the seed.
  CHECK(estimate_mean_return(env, expert, 500, 17) ==
        estimate_mean_return(env, expert, 500, 17));
}
