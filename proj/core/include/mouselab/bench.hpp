#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mouselab/interpret.hpp"

namespace mouselab {

double perf_ratio(double m_f, double m);  // failed runs pass m_f such that ratio 0

// Natural-log Shannon entropy over outcome classes: formulas by canonical
// digest, all failures as one class.
double output_entropy(const std::vector<std::optional<uint64_t>>& outcomes);

double success_rate(const std::vector<std::optional<uint64_t>>& outcomes);

struct BenchCell {
  EnvKind kind = EnvKind::Increasing;
  int x = 64;  // demonstration count
};

struct SuiteConfig {
  std::vector<BenchCell> cells;                     // default: 4 kinds x {8,64,128}
  std::vector<std::string> methods = {"ai", "binary", "lpp"};
  int runs = 10;
  bool fast = false;                                // L=10,000 / runs=3 profile
  InterpretConfig base;                             // alpha, delta, depth, ...
  GrammarConfig grammar;
  std::map<std::string, int> clusters_by_env = {
      {"increasing", 18}, {"decreasing", 23}, {"constant", 18}, {"different", 23}};
  uint64_t seed = 0;

  SuiteConfig();
};

struct RunRecord {
  uint64_t seed = 0;
  bool found = false;
  uint64_t formula_digest = 0;
  std::string formula_text;
  double m_f = 0;
  double perf = 0;  // 0 for failures
  double support = 0;
  size_t tree_nodes = 0;
  std::string reason;
};

struct CellReport {
  EnvKind kind = EnvKind::Increasing;
  int x = 0;
  std::string method;
  std::vector<RunRecord> runs;
  // Aggregates (recomputable from runs):
  double perf_mean = 0, perf_ci_halfwidth = 0;
  double entropy = 0;
  double success = 0;
  double mean_tree_nodes = 0;   // over found runs
  double mean_support = 0;      // over found runs
};

// Recompute the aggregate fields from the per-run records.
void compute_aggregates(CellReport& cell);

struct MethodSummary {
  std::string method;
  double perf_mean = 0;  // mean of cell PERF means
  double success = 0;    // mean of cell success rates
};

struct BenchmarkReport {
  SuiteConfig config;
  std::vector<CellReport> cells;
  std::vector<MethodSummary> summaries;
};

BenchmarkReport run_benchmark_suite(const SuiteConfig& config);

// 95% half-width via Student's t over the per-run values.
double t_ci_halfwidth(const std::vector<double>& values);

}  // namespace mouselab
