#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mouselab/env.hpp"

namespace mouselab {

// Open-addressing hash map Belief -> double, sized for the canonical state
// space of the full tree (~8.9M states) without node allocations.
class FlatMap {
 public:
  explicit FlatMap(size_t initial_capacity = 1 << 12);
  double* find(uint64_t key);
  const double* find(uint64_t key) const;
  void insert(uint64_t key, double value);
  size_t size() const { return size_; }
  size_t capacity() const { return keys_.size(); }
  template <class F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i]) f(keys_[i] - 1, vals_[i]);
  }

 private:
  void grow();
  std::vector<uint64_t> keys_;  // stores key+1; 0 = empty
  std::vector<double> vals_;
  size_t size_ = 0;
};

// Exact optimal value function of the metalevel MDP, memoized on canonical
// beliefs and filled lazily from whatever states are queried.
class ValueTable {
 public:
  explicit ValueTable(const EnvironmentSpec& env, size_t capacity_hint = 0);

  const EnvironmentSpec& env() const { return *env_; }
  double value(Belief b);
  // Q of every available computation at b, in available_computations order
  // (terminate first, then clicks by node id).
  std::vector<std::pair<Computation, double>> q_values(Belief b);
  // Computations within tie_eps of the best Q.
  std::vector<Computation> optimal_action_set(Belief b, double tie_eps = 1e-9);
  size_t state_count() const { return memo_.size(); }

  bool save_cache(const std::string& path) const;
  // Returns false (leaving the table untouched) when the file is missing or
  // was built for a different environment.
  bool load_cache(const std::string& path);

 private:
  double value_canonical(Belief cb);
  const EnvironmentSpec* env_;
  FlatMap memo_;
};

// Solve from the empty belief so value/q_values afterwards are pure lookups
// along reachable states.
ValueTable solve(const EnvironmentSpec& env);

}  // namespace mouselab
