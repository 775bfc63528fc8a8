#include "mouselab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mouselab {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

namespace {

std::string fingerprint_hex(uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fp);
  return buf;
}

json belief_values(const EnvironmentSpec& env, Belief b) {
  json arr = json::array();
  for (int n = 1; n <= env.tree.node_count; ++n) {
    if (env.observed(b, n)) arr.push_back(env.value_code(b, n));
    else arr.push_back(nullptr);
  }
  return arr;
}

Belief belief_from_values(const EnvironmentSpec& env, const json& arr) {
  Belief b = 0;
  for (int n = 1; n <= env.tree.node_count; ++n) {
    const json& v = arr.at(size_t(n - 1));
    if (v.is_null()) continue;
    const auto& s = env.support_of(n);
    int value = v.get<int>();
    auto it = std::find(s.begin(), s.end(), value);
    if (it == s.end())
      throw std::runtime_error("belief value off support in demos file");
    b = env.tree.with_code(b, n, int(it - s.begin()) + 1);
  }
  return b;
}

}  // namespace

void write_demos_file(const std::string& path, const DemonstrationSet& demos,
                      const EnvironmentSpec& env) {
  ordered_json doc;
  doc["format_version"] = 1;
  doc["env"] = env_kind_name(demos.kind);
  doc["scale"] = demos.scale;
  doc["seed"] = demos.seed;
  ordered_json trajs = ordered_json::array();
  for (const auto& t : demos.trajectories) {
    ordered_json steps = ordered_json::array();
    for (const auto& st : t.steps) {
      ordered_json step;
      step["belief"] = belief_values(env, st.belief);
      if (st.action.is_click()) step["action"] = ordered_json{{"click", st.action.node()}};
      else step["action"] = "terminate";
      if (st.prev_click > 0) step["prev_click"] = st.prev_click;
      else step["prev_click"] = nullptr;
      steps.push_back(std::move(step));
    }
    trajs.push_back(ordered_json{{"payoff", t.payoff}, {"steps", std::move(steps)}});
  }
  doc["trajectories"] = std::move(trajs);
  write_text_file(path, doc.dump(2) + "\n");
}

DemonstrationSet read_demos_file(const std::string& path, EnvironmentSpec& env_out) {
  json doc = json::parse(read_text_file(path));
  DemonstrationSet demos;
  demos.kind = env_kind_from_name(doc.at("env").get<std::string>());
  env_out = make_environment(demos.kind);
  demos.scale = doc.at("scale").get<int>();
  demos.seed = doc.at("seed").get<uint64_t>();
  for (const auto& t : doc.at("trajectories")) {
    Trajectory traj;
    traj.payoff = t.at("payoff").get<double>();
    for (const auto& st : t.at("steps")) {
      TrajectoryStep step;
      step.belief = belief_from_values(env_out, st.at("belief"));
      const json& a = st.at("action");
      step.action = a.is_string() ? Computation::terminate()
                                  : Computation::click(a.at("click").get<int>());
      const json& pc = st.at("prev_click");
      step.prev_click = pc.is_null() ? -1 : pc.get<int>();
      traj.steps.push_back(step);
    }
    demos.trajectories.push_back(std::move(traj));
  }
  return demos;
}

void write_formula_file(const std::string& path, const Formula& formula,
                        const PredicateSet& preds, const EnvironmentSpec& env) {
  ordered_json doc;
  doc["format_version"] = 1;
  doc["env"] = env_kind_name(env.kind);
  doc["grammar_fingerprint"] = fingerprint_hex(preds.grammar_fingerprint);
  doc["formula"] = formula.to_text(preds);
  write_text_file(path, doc.dump(2) + "\n");
}

EnvKind read_formula_env(const std::string& path) {
  json doc = json::parse(read_text_file(path));
  return env_kind_from_name(doc.at("env").get<std::string>());
}

Formula read_formula_file(const std::string& path, const PredicateSet& preds) {
  json doc = json::parse(read_text_file(path));
  std::string fp = doc.at("grammar_fingerprint").get<std::string>();
  if (fp != fingerprint_hex(preds.grammar_fingerprint))
    throw std::runtime_error("formula file grammar fingerprint mismatch");
  return Formula::from_text(doc.at("formula").get<std::string>(), preds);
}

void write_grammar_file(const std::string& path, const GrammarConfig& config) {
  write_text_file(path, config.to_text());
}

GrammarConfig read_grammar_file(const std::string& path) {
  return GrammarConfig::from_text(read_text_file(path));
}

std::string interpret_report_text(const InterpretResult& result,
                                  const InterpretConfig& config,
                                  const PredicateSet& preds,
                                  const EnvironmentSpec& env,
                                  const std::string& method) {
  ordered_json doc;
  doc["method"] = method;
  doc["env"] = env_kind_name(env.kind);
  doc["outcome"] = result.found ? "found" : "no_solution";
  if (result.found) {
    doc["grammar_fingerprint"] = fingerprint_hex(preds.grammar_fingerprint);
    doc["formula"] = result.formula.to_text(preds);
    doc["formula_digest"] = fingerprint_hex(result.formula.digest());
    doc["m_f"] = result.m_f;
    doc["perf_ratio"] = result.perf_ratio;
    doc["support_fraction"] = result.support_fraction;
    FormulaStats stats = formula_stats(result.formula);
    doc["tree_nodes"] = stats.equivalent_tree_nodes;
    doc["literal_count"] = stats.literal_count;
  } else {
    doc["reason"] = result.reason;
  }
  doc["iterations"] = result.iterations;
  ordered_json cfg;
  cfg["alpha"] = config.alpha;
  cfg["delta"] = config.delta;
  cfg["rollouts"] = config.rollouts;
  cfg["max_depth"] = config.max_depth;
  cfg["clusters"] = config.clusters;
  cfg["cut_size"] = config.cut_size;
  cfg["split"] = config.split;
  cfg["mean_expert_reward"] = config.mean_expert_reward;
  cfg["patience"] = config.patience;
  cfg["seed"] = config.seed;
  doc["config"] = std::move(cfg);
  return doc.dump(2) + "\n";
}

std::string bench_report_text(const BenchmarkReport& report) {
  ordered_json doc;
  doc["runs"] = report.config.fast ? std::min(report.config.runs, 3)
                                   : report.config.runs;
  doc["fast"] = report.config.fast;
  doc["seed"] = report.config.seed;
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    ordered_json cell;
    cell["env"] = env_kind_name(c.kind);
    cell["x"] = c.x;
    cell["method"] = c.method;
    cell["perf_mean"] = c.perf_mean;
    cell["perf_ci_halfwidth"] = c.perf_ci_halfwidth;
    cell["entropy"] = c.entropy;
    cell["success"] = c.success;
    cell["mean_tree_nodes"] = c.mean_tree_nodes;
    cell["mean_support"] = c.mean_support;
    ordered_json runs = ordered_json::array();
    for (const auto& r : c.runs) {
      ordered_json rec;
      rec["seed"] = r.seed;
      rec["found"] = r.found;
      if (r.found) {
        rec["formula"] = r.formula_text;
        rec["formula_digest"] = fingerprint_hex(r.formula_digest);
        rec["m_f"] = r.m_f;
        rec["perf"] = r.perf;
        rec["support"] = r.support;
        rec["tree_nodes"] = r.tree_nodes;
      } else {
        rec["reason"] = r.reason;
      }
      runs.push_back(std::move(rec));
    }
    cell["runs"] = std::move(runs);
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  ordered_json summaries = ordered_json::array();
  for (const auto& s : report.summaries)
    summaries.push_back(ordered_json{
        {"method", s.method}, {"perf_mean", s.perf_mean}, {"success", s.success}});
  doc["summaries"] = std::move(summaries);
  return doc.dump(2) + "\n";
}

SuiteConfig read_suite_file(const std::string& path) {
  json doc = json::parse(read_text_file(path));
  SuiteConfig cfg;
  if (doc.contains("cells")) {
    cfg.cells.clear();
    for (const auto& c : doc.at("cells"))
      cfg.cells.push_back(
          {env_kind_from_name(c.at("env").get<std::string>()), c.at("x").get<int>()});
  }
  if (doc.contains("methods"))
    cfg.methods = doc.at("methods").get<std::vector<std::string>>();
  if (doc.contains("clusters"))
    for (const auto& [k, v] : doc.at("clusters").items())
      cfg.clusters_by_env[k] = v.get<int>();
  if (doc.contains("alpha")) cfg.base.alpha = doc.at("alpha").get<double>();
  if (doc.contains("delta")) cfg.base.delta = doc.at("delta").get<double>();
  if (doc.contains("rollouts")) cfg.base.rollouts = doc.at("rollouts").get<int>();
  if (doc.contains("max_depth")) cfg.base.max_depth = doc.at("max_depth").get<int>();
  if (doc.contains("cut_size")) cfg.base.cut_size = doc.at("cut_size").get<double>();
  if (doc.contains("split")) cfg.base.split = doc.at("split").get<double>();
  if (doc.contains("patience")) cfg.base.patience = doc.at("patience").get<int>();
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<uint64_t>();
  return cfg;
}

}  // namespace mouselab
