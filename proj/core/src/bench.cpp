#include "mouselab/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mouselab/flow.hpp"
#include "mouselab/rng.hpp"

namespace mouselab {

double perf_ratio(double m_f, double m) {
  if (m <= 0) throw std::invalid_argument("expert mean reward must be positive");
  return std::max(0.0, m_f / m);
}

double output_entropy(const std::vector<std::optional<uint64_t>>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("no outcomes");
  std::map<uint64_t, size_t> counts;
  size_t failures = 0;
  for (const auto& o : outcomes)
    if (o) ++counts[*o];
    else ++failures;
  if (failures) counts[~uint64_t(0)] += failures;  // one failure class
  double h = 0, n = double(outcomes.size());
  for (const auto& [digest, c] : counts) {
    double p = double(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

double success_rate(const std::vector<std::optional<uint64_t>>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("no outcomes");
  size_t found = 0;
  for (const auto& o : outcomes) found += o.has_value();
  return double(found) / double(outcomes.size());
}

double t_ci_halfwidth(const std::vector<double>& values) {
  size_t n = values.size();
  if (n < 2) return 0;
  // two-sided 95% t critical values, df = 1..30
  static const double t95[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                               2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                               2.131,  2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                               2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
                               2.045,  2.042};
  size_t df = n - 1;
  double t = df <= 30 ? t95[df - 1] : 1.96;
  double mean = 0;
  for (double v : values) mean += v;
  mean /= double(n);
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= double(n - 1);
  return t * std::sqrt(var / double(n));
}

SuiteConfig::SuiteConfig() {
  for (EnvKind k : {EnvKind::Increasing, EnvKind::Decreasing, EnvKind::Constant,
                    EnvKind::Different})
    for (int x : {8, 64, 128}) cells.push_back({k, x});
}

void compute_aggregates(CellReport& cell) {
  std::vector<std::optional<uint64_t>> outcomes;
  std::vector<double> perfs;
  double nodes = 0, support = 0;
  size_t found = 0;
  for (const auto& r : cell.runs) {
    outcomes.push_back(r.found ? std::optional<uint64_t>(r.formula_digest)
                               : std::nullopt);
    perfs.push_back(r.perf);
    if (r.found) {
      ++found;
      nodes += double(r.tree_nodes);
      support += r.support;
    }
  }
  cell.entropy = output_entropy(outcomes);
  cell.success = success_rate(outcomes);
  double sum = 0;
  for (double p : perfs) sum += p;
  cell.perf_mean = sum / double(perfs.size());
  cell.perf_ci_halfwidth = t_ci_halfwidth(perfs);
  cell.mean_tree_nodes = found ? nodes / double(found) : 0;
  cell.mean_support = found ? support / double(found) : 0;
}

namespace {

uint64_t cell_salt(EnvKind kind, int x, const std::string& method, int run) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  feed(env_kind_name(kind));
  feed("|" + std::to_string(x) + "|" + method + "|" + std::to_string(run));
  return h;
}

}  // namespace

BenchmarkReport run_benchmark_suite(const SuiteConfig& config) {
  BenchmarkReport report;
  report.config = config;
  int runs = config.fast ? std::min(config.runs, 3) : config.runs;
  int rollouts = config.fast ? 10000 : config.base.rollouts;
  PredicateSet preds = enumerate_predicates(config.grammar);

  // Group cells by environment so each gets solved exactly once.
  std::vector<EnvKind> kinds;
  for (const auto& c : config.cells)
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
      kinds.push_back(c.kind);

  for (EnvKind kind : kinds) {
    EnvironmentSpec env = make_environment(kind);
    ValueTable table = solve(env);
    double m = table.value(Belief(0));
    ExpertPolicy expert(table);  // exact ties; tie_epsilon only widens negatives

    for (const auto& cell_cfg : config.cells) {
      if (cell_cfg.kind != kind) continue;
      for (const auto& method : config.methods) {
        CellReport cell;
        cell.kind = kind;
        cell.x = cell_cfg.x;
        cell.method = method;
        for (int run = 0; run < runs; ++run) {
          uint64_t salt = cell_salt(kind, cell_cfg.x, method, run);
          uint64_t demo_seed = mix64(config.seed ^ mix64(salt));
          DemonstrationSet demos =
              generate_demonstrations(env, expert, cell_cfg.x, demo_seed);
          demos.scale = cell_cfg.x;

          InterpretConfig cfg = config.base;
          cfg.rollouts = rollouts;
          cfg.mean_expert_reward = m;
          cfg.clusters = config.clusters_by_env.at(env_kind_name(kind));
          cfg.seed = mix64(demo_seed ^ 0x5eedull);

          InterpretResult r;
          if (method == "ai") r = ai_interpret(demos, preds, env, table, cfg);
          else if (method == "binary") r = binary_interpret(demos, preds, env, table, cfg);
          else if (method == "lpp") r = lpp_baseline(demos, preds, env, table, cfg);
          else throw std::invalid_argument("unknown method: " + method);

          RunRecord rec;
          rec.seed = cfg.seed;
          rec.found = r.found;
          if (r.found) {
            rec.formula_digest = r.formula.digest();
            rec.formula_text = r.formula.to_text(preds);
            rec.m_f = r.m_f;
            rec.perf = perf_ratio(r.m_f, m);
            rec.support = r.support_fraction;
            rec.tree_nodes = formula_stats(r.formula).equivalent_tree_nodes;
          } else {
            rec.reason = r.reason;
          }
          cell.runs.push_back(std::move(rec));
        }
        compute_aggregates(cell);
        report.cells.push_back(std::move(cell));
      }
    }
  }

  for (const auto& method : config.methods) {
    MethodSummary s;
    s.method = method;
    size_t n = 0;
    for (const auto& c : report.cells) {
      if (c.method != method) continue;
      s.perf_mean += c.perf_mean;
      s.success += c.success;
      ++n;
    }
    if (n) {
      s.perf_mean /= double(n);
      s.success /= double(n);
    }
    report.summaries.push_back(s);
  }
  return report;
}

}  // namespace mouselab
