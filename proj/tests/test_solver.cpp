#include <cstdio>
#include <map>
#include <random>

#include "doctest.h"
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

// Reference expectimax with no canonicalization and no memo sharing tricks.
double brute_value(const EnvironmentSpec& env, Belief b,
                   std::map<Belief, double>& memo) {
  auto it = memo.find(b);
  if (it != memo.end()) return it->second;
  double best = termination_reward(env, b);
  for (int n = 1; n <= env.tree.node_count; ++n) {
    if (env.observed(b, n)) continue;
    double q = -env.click_cost;
    auto outs = click_outcomes(env, b, n);
    for (Belief nb : outs) q += brute_value(env, nb, memo) / double(outs.size());
    best = std::max(best, q);
  }
  memo[b] = best;
  return best;
}

}  // namespace

TEST_CASE("flat map insert, find, grow") {
  FlatMap m(4);
  std::mt19937_64 rng(7);
  std::map<uint64_t, double> ref;
  for (int i = 0; i < 20000; ++i) {
    uint64_t k = rng();
    double v = double(i);
    m.insert(k, v);
    ref[k] = v;
  }
  CHECK(m.size() == ref.size());
  for (const auto& [k, v] : ref) {
    const double* p = m.find(k);
    REQUIRE(p != nullptr);
    CHECK(*p == v);
  }
  CHECK(m.find(0xdeadbeefdeadbeefull) == nullptr);
  size_t visited = 0;
  m.for_each([&](uint64_t k, double v) {
    ++visited;
    CHECK(ref.at(k) == v);
  });
  CHECK(visited == ref.size());
}

TEST_CASE("solver matches brute-force expectimax on the mini tree") {
  auto env = mini_env();
  std::map<Belief, double> memo;
  ValueTable table(env);

  CHECK(table.value(0) == doctest::Approx(brute_value(env, 0, memo)).epsilon(1e-12));

  // Agreement on every reachable belief, not just the root.
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> code(0, 4);
  for (int trial = 0; trial < 300; ++trial) {
    Belief b = 0;
    for (int n = 1; n <= env.tree.node_count; ++n)
      b = env.tree.with_code(b, n, code(rng));
    CHECK(table.value(b) == doctest::Approx(brute_value(env, b, memo)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate single-node environment") {
  EnvironmentSpec env;
  env.kind = EnvKind::Custom;
  env.tree = make_single_node_tree();
  env.support = {{-2, 2}};
  ValueTable table(env);
  CHECK(table.value(0) == doctest::Approx(0.0));
  auto q = table.q_values(0);
  REQUIRE(q.size() == 2);
  CHECK(!q[0].first.is_click());
  CHECK(q[0].second == doctest::Approx(0.0));  // terminate
  CHECK(q[1].first.node() == 1);
  CHECK(q[1].second == doctest::Approx(0.0));  // -1 + 0.5*2 + 0.5*0
}

TEST_CASE("q_values respect branch symmetry at the root") {
  auto env = mini_env();
  ValueTable table(env);
  auto q = table.q_values(0);
  // Terminate first, clicks in node order.
  REQUIRE(q.size() == size_t(env.tree.node_count) + 1);
  CHECK(!q[0].first.is_click());
  for (size_t i = 1; i < q.size(); ++i) CHECK(q[i].first.node() == int(i));
  // The two leaves are symmetric siblings.
  CHECK(q[3].second == doctest::Approx(q[4].second));
}

TEST_CASE("optimal action set contains every near-optimal computation") {
  auto env = mini_env();
  ValueTable table(env);
  auto acts = table.optimal_action_set(0);
  REQUIRE(!acts.empty());
  auto q = table.q_values(0);
  double best = -1e18;
  for (const auto& [c, v] : q) best = std::max(best, v);
  for (const auto& [c, v] : q) {
    bool in = std::find(acts.begin(), acts.end(), c) != acts.end();
    CHECK(in == (v >= best - 1e-9));
  }
}

TEST_CASE("value cache round-trips and rejects other environments") {
  auto env = mini_env();
  ValueTable table(env);
  double v0 = table.value(0);
  std::string path = "mini_env_cache_test.bin";
  REQUIRE(table.save_cache(path));

  ValueTable fresh(env);
  REQUIRE(fresh.load_cache(path));
  CHECK(fresh.value(0) == doctest::Approx(v0).epsilon(1e-15));
  CHECK(fresh.state_count() == table.state_count());

  EnvironmentSpec other = env;
  other.support[0] = {-2, -1, 1, 2};
  ValueTable wrong(other);
  CHECK(!wrong.load_cache(path));
  CHECK(!wrong.load_cache("does_not_exist.bin"));
  std::remove(path.c_str());
}
