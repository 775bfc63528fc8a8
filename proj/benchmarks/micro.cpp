// Micro benchmarks for the hot paths: belief canonicalization, value-table
// lookups, policy rollouts, and predicate featurization.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/env.hpp"
#include "mouselab/lpp.hpp"
#include "mouselab/solver.hpp"

using namespace mouselab;

namespace {

const EnvironmentSpec& env312() {
  static EnvironmentSpec env = make_environment(EnvKind::Increasing);
  return env;
}

std::vector<Belief> random_beliefs(size_t n, uint64_t seed) {
  const auto& env = env312();
  std::mt19937_64 rng(seed);
  std::vector<Belief> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Belief b = 0;
    for (int node = 1; node <= env.tree.node_count; ++node)
      b = env.tree.with_code(b, node, int(rng() % 5));
    out.push_back(b);
  }
  return out;
}

void BM_Canonicalize(benchmark::State& state) {
  const auto& env = env312();
  auto beliefs = random_beliefs(1024, 42);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonicalize(env, beliefs[i++ & 1023]));
  }
}
BENCHMARK(BM_Canonicalize);

void BM_TerminationReward(benchmark::State& state) {
  const auto& env = env312();
  auto beliefs = random_beliefs(1024, 43);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(termination_reward(env, beliefs[i++ & 1023]));
  }
}
BENCHMARK(BM_TerminationReward);

void BM_FlatMapLookup(benchmark::State& state) {
  FlatMap map;
  std::mt19937_64 rng(7);
  std::vector<uint64_t> keys(1 << 16);
  for (auto& k : keys) {
    k = rng();
    map.insert(k, 1.0);
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.find(keys[i++ & 0xffff]));
  }
}
BENCHMARK(BM_FlatMapLookup);

void BM_FormulaRollout(benchmark::State& state) {
  const auto& env = env312();
  auto preds = enumerate_predicates(GrammarConfig{});
  Formula f = Formula::from_text(
      "(among(!is_observed & has_largest_depth) & !is_previous_observed_max)",
      preds);
  FormulaPolicy policy(f, preds, env);
  std::mt19937_64 rng(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_trajectory(env, policy, rng).payoff);
  }
}
BENCHMARK(BM_FormulaRollout);

void BM_Featurize(benchmark::State& state) {
  const auto& env = env312();
  auto preds = enumerate_predicates(GrammarConfig{});
  auto beliefs = random_beliefs(64, 44);
  size_t i = 0;
  for (auto _ : state) {
    EvalContext ctx(env, beliefs[i++ & 63], -1);
    double acc = 0;
    for (size_t p = 0; p < preds.size(); ++p)
      acc += evaluate(preds[p], ctx, Computation::click(7));
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_Featurize);

}  // namespace

BENCHMARK_MAIN();
