#include "mouselab/demos.hpp"

#include "mouselab/rng.hpp"

namespace mouselab {

Computation ExpertPolicy::act(Belief b, int /*prev_click*/, std::mt19937_64& rng) {
  auto best = table_->optimal_action_set(b, tie_eps_);
  if (best.size() == 1) return best[0];
  return best[std::uniform_int_distribution<size_t>(0, best.size() - 1)(rng)];
}

Trajectory sample_trajectory(const EnvironmentSpec& env, Policy& policy,
                             std::mt19937_64& rng) {
  policy.reset();
  GroundTruth gt = sample_ground_truth(env, rng);
  Trajectory traj;
  Belief b = 0;
  int prev = -1;
  for (;;) {
    Computation c = policy.act(b, prev, rng);
    traj.steps.push_back({b, c, prev});
    StepResult r = apply_computation(env, b, c, gt);
    traj.payoff += r.reward;
    if (r.done) break;
    prev = c.node();
    b = r.belief;
  }
  return traj;
}

DemonstrationSet generate_demonstrations(const EnvironmentSpec& env,
                                         Policy& policy, int n, uint64_t seed) {
  DemonstrationSet set;
  set.kind = env.kind;
  set.seed = seed;
  set.trajectories.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto rng = make_rng(seed, uint64_t(i));
    set.trajectories.push_back(sample_trajectory(env, policy, rng));
  }
  return set;
}

double estimate_mean_return(const EnvironmentSpec& env, Policy& policy,
                            int rollouts, uint64_t seed) {
  double total = 0;
  for (int i = 0; i < rollouts; ++i) {
    auto rng = make_rng(seed, uint64_t(i));
    total += sample_trajectory(env, policy, rng).payoff;
  }
  return total / double(rollouts);
}

std::vector<DemoPair> DemonstrationSet::pairs() const {
  std::vector<DemoPair> out;
  for (size_t ti = 0; ti < trajectories.size(); ++ti)
    for (size_t si = 0; si < trajectories[ti].steps.size(); ++si) {
      const auto& st = trajectories[ti].steps[si];
      out.push_back({st.belief, st.action, st.prev_click, int(ti), int(si)});
    }
  return out;
}

std::vector<DemoPair> DemonstrationSet::click_pairs() const {
  std::vector<DemoPair> out;
  for (const auto& p : pairs())
    if (p.action.is_click()) out.push_back(p);
  return out;
}

std::vector<NegativeExample> negative_examples(const EnvironmentSpec& env,
                                               const std::vector<DemoPair>& pairs) {
  std::vector<NegativeExample> out;
  for (const auto& p : pairs)
    for (int n = 1; n <= env.tree.node_count; ++n)
      if (!env.observed(p.belief, n) && Computation::click(n) != p.action)
        out.push_back({p.belief, Computation::click(n), p.prev_click});
  return out;
}

}  // namespace mouselab
