#pragma once
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "mouselab/env.hpp"
#include "mouselab/solver.hpp"

namespace mouselab {

// A policy may carry per-episode state (reset() is called at the start of
// every trajectory). prev_click is the node revealed by the previous
// computation, or -1 at the first step.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset() {}
  virtual Computation act(Belief b, int prev_click, std::mt19937_64& rng) = 0;
};

// Uniformly random member of the exact optimal action set.
class ExpertPolicy : public Policy {
 public:
  ExpertPolicy(ValueTable& table, double tie_eps = 1e-9)
      : table_(&table), tie_eps_(tie_eps) {}
  Computation act(Belief b, int prev_click, std::mt19937_64& rng) override;

 private:
  ValueTable* table_;
  double tie_eps_;
};

struct TrajectoryStep {
  Belief belief;       // belief *before* the computation
  Computation action;
  int prev_click;      // -1 at the first step
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;  // last step is always terminate
  double payoff = 0;                  // total return incl. click costs
};

// One (belief, action) demonstration pair with its evaluation context.
struct DemoPair {
  Belief belief;
  Computation action;
  int prev_click;
  int trajectory_id;
  int step_index;
};

struct DemonstrationSet {
  EnvKind kind = EnvKind::Custom;
  int scale = 64;  // benchmark size parameter the set was drawn for
  uint64_t seed = 0;
  std::vector<Trajectory> trajectories;

  std::vector<DemoPair> pairs() const;        // all steps, terminations included
  std::vector<DemoPair> click_pairs() const;  // clicks only
};

Trajectory sample_trajectory(const EnvironmentSpec& env, Policy& policy,
                             std::mt19937_64& rng);

// n trajectories from independent substreams of `seed`.
DemonstrationSet generate_demonstrations(const EnvironmentSpec& env,
                                         Policy& policy, int n, uint64_t seed);

// Monte-Carlo mean payoff over `rollouts` trajectories (substreams of seed).
double estimate_mean_return(const EnvironmentSpec& env, Policy& policy,
                            int rollouts, uint64_t seed);

// Beliefs where the expert was observed, paired with the computations the
// expert did *not* take there: the negative examples for imitation.
struct NegativeExample {
  Belief belief;
  Computation action;
  int prev_click;
};
std::vector<NegativeExample> negative_examples(const EnvironmentSpec& env,
                                               const std::vector<DemoPair>& pairs);

}  // namespace mouselab
