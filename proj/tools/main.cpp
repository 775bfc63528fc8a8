// Command-line front end: solve environments, generate demonstrations, run
// the interpretation methods, the full discovery pipeline, the benchmark
// suite, and render/score flowcharts.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mouselab/bench.hpp"
#include "mouselab/flow.hpp"
#include "mouselab/io.hpp"

using namespace mouselab;
using nlohmann::ordered_json;

namespace {

ValueTable solve_with_cache(const EnvironmentSpec& env, const std::string& cache) {
  ValueTable table(env);
  if (!cache.empty() && table.load_cache(cache)) return table;
  table.value(Belief(0));
  if (!cache.empty()) table.save_cache(cache);
  return table;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) std::cout << text;
  else write_text_file(out_path, text);
}

int run(int argc, char** argv) {
  CLI::App app{"Mouselab metalevel planning: exact solver, imitation-based "
               "strategy interpretation, and flowchart rendering"};
  app.require_subcommand(1);

  // --- solve ---
  std::string env_name, cache_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an environment exactly");
  solve_cmd->add_option("--env", env_name, "Environment kind")->required();
  solve_cmd->add_option("--cache", cache_path, "Value cache file");
  solve_cmd->callback([&] {
    EnvironmentSpec env = make_environment(env_kind_from_name(env_name));
    ValueTable table = solve_with_cache(env, cache_path);
    ordered_json doc;
    doc["env"] = env_name;
    doc["v0"] = table.value(Belief(0));
    doc["canonical_states"] = table.state_count();
    std::cout << doc.dump(2) << "\n";
  });

  // --- demos ---
  int n_demos = 64;
  uint64_t seed = 0;
  std::string out_path;
  auto* demos_cmd = app.add_subcommand("demos", "Generate expert demonstrations");
  demos_cmd->add_option("--env", env_name, "Environment kind")->required();
  demos_cmd->add_option("--n", n_demos, "Number of trajectories")->required();
  demos_cmd->add_option("--seed", seed, "Master seed")->required();
  demos_cmd->add_option("--out", out_path, "Output file")->required();
  demos_cmd->add_option("--cache", cache_path, "Value cache file");
  demos_cmd->callback([&] {
    EnvironmentSpec env = make_environment(env_kind_from_name(env_name));
    ValueTable table = solve_with_cache(env, cache_path);
    ExpertPolicy expert(table);
    DemonstrationSet demos = generate_demonstrations(env, expert, n_demos, seed);
    demos.scale = n_demos;
    write_demos_file(out_path, demos, env);
  });

  // --- interpret ---
  std::string method = "ai", demos_path, grammar_path;
  InterpretConfig icfg;
  auto* interp_cmd = app.add_subcommand("interpret", "Interpret demonstrations");
  interp_cmd->add_option("--method", method, "ai|binary|lpp")->required();
  interp_cmd->add_option("--demos", demos_path, "Demonstrations file")->required();
  interp_cmd->add_option("--grammar", grammar_path, "Grammar config file");
  interp_cmd->add_option("--alpha", icfg.alpha, "Aspiration ratio");
  interp_cmd->add_option("--delta", icfg.delta, "Tolerance");
  interp_cmd->add_option("--rollouts", icfg.rollouts, "Monte Carlo rollouts L");
  interp_cmd->add_option("--max-depth", icfg.max_depth, "Max conjunction size d");
  interp_cmd->add_option("--clusters", icfg.clusters, "Cluster count N");
  interp_cmd->add_option("--cut-size", icfg.cut_size, "Cluster cut size X");
  interp_cmd->add_option("--split", icfg.split, "Train fraction S");
  interp_cmd->add_option("--patience", icfg.patience, "Binary-Interpret patience");
  interp_cmd->add_option("--seed", icfg.seed, "Seed");
  interp_cmd->add_option("--out", out_path, "Report file");
  interp_cmd->add_option("--cache", cache_path, "Value cache file");
  interp_cmd->callback([&] {
    EnvironmentSpec env;
    DemonstrationSet demos = read_demos_file(demos_path, env);
    GrammarConfig grammar =
        grammar_path.empty() ? GrammarConfig{} : read_grammar_file(grammar_path);
    PredicateSet preds = enumerate_predicates(grammar);
    ValueTable table = solve_with_cache(env, cache_path);
    icfg.mean_expert_reward = table.value(Belief(0));
    InterpretResult r;
    if (method == "ai") r = ai_interpret(demos, preds, env, table, icfg);
    else if (method == "binary") r = binary_interpret(demos, preds, env, table, icfg);
    else if (method == "lpp") r = lpp_baseline(demos, preds, env, table, icfg);
    else throw CLI::ValidationError("--method", "must be ai, binary, or lpp");
    emit(interpret_report_text(r, icfg, preds, env, method), out_path);
  });

  // --- pipeline ---
  PipelineConfig pcfg;
  int clusters_override = 0;
  std::string out_dir;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run the discovery pipeline");
  pipe_cmd->add_option("--env", env_name, "Environment kind")->required();
  pipe_cmd->add_option("--n-demos", pcfg.x, "Demonstration count");
  pipe_cmd->add_option("--k", pcfg.K, "Number of elbow candidates");
  pipe_cmd->add_option("--clusters-override", clusters_override,
                       "Skip the elbow heuristic and use this N");
  pipe_cmd->add_option("--seed", pcfg.base.seed, "Seed");
  pipe_cmd->add_option("--rollouts", pcfg.base.rollouts, "Monte Carlo rollouts L");
  pipe_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  pipe_cmd->callback([&] {
    if (clusters_override > 0) pcfg.clusters_override = clusters_override;
    EnvKind kind = env_kind_from_name(env_name);
    CandidateSet set = discover(kind, pcfg);
    EnvironmentSpec env = make_environment(kind);
    PredicateSet preds = enumerate_predicates(pcfg.grammar);
    std::filesystem::create_directories(out_dir);
    write_grammar_file(out_dir + "/grammar.txt", pcfg.grammar);
    ordered_json manifest;
    manifest["env"] = env_name;
    manifest["n_demos"] = pcfg.x;
    manifest["mean_expert_reward"] = set.mean_expert_reward;
    manifest["no_elbow"] = set.no_elbow;
    ordered_json curve = ordered_json::array();
    for (auto [n, cv] : set.elbow_curve)
      curve.push_back(ordered_json{{"N", n}, {"CV", cv}});
    manifest["elbow_curve"] = std::move(curve);
    manifest["diagnostics"] = set.diagnostics;
    ordered_json cands = ordered_json::array();
    for (size_t i = 0; i < set.candidates.size(); ++i) {
      const auto& c = set.candidates[i];
      std::string stem = "candidate_" + std::to_string(i);
      write_formula_file(out_dir + "/" + stem + ".formula.json", c.formula, preds, env);
      write_text_file(out_dir + "/" + stem + ".dot",
                      render(c.tree, RenderFormat::Dot));
      cands.push_back(ordered_json{{"clusters", c.clusters},
                                   {"formula", c.formula.to_text(preds)},
                                   {"perf_ratio", c.perf_ratio},
                                   {"tree_nodes", c.tree.node_count},
                                   {"depth", c.tree.depth},
                                   {"files", {stem + ".formula.json", stem + ".dot"}}});
    }
    manifest["candidates"] = std::move(cands);
    if (!set.candidates.empty()) {
      const PipelineCandidate& best = select_tree(set, preds);
      write_formula_file(out_dir + "/selected.formula.json", best.formula, preds, env);
      write_text_file(out_dir + "/selected.dot", render(best.tree, RenderFormat::Dot));
      write_text_file(out_dir + "/selected.txt", render(best.tree, RenderFormat::Ascii));
      manifest["selected"] = best.formula.to_text(preds);
    }
    write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  });

  // --- bench ---
  std::string suite_path;
  int runs = 10;
  bool fast = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark suite");
  bench_cmd->add_option("--suite", suite_path,
                        "Suite config file (default: full 12-cell suite)");
  bench_cmd->add_option("--runs", runs, "Runs per cell");
  bench_cmd->add_flag("--fast", fast, "Fast profile (L=10,000, runs<=3)");
  bench_cmd->add_option("--out", out_path, "Report file")->required();
  bench_cmd->callback([&] {
    SuiteConfig cfg = suite_path.empty() ? SuiteConfig{} : read_suite_file(suite_path);
    cfg.runs = runs;
    cfg.fast = fast;
    BenchmarkReport report = run_benchmark_suite(cfg);
    emit(bench_report_text(report), out_path);
  });

  // --- render ---
  std::string formula_path, format_name = "dot";
  auto* render_cmd = app.add_subcommand("render", "Render a formula as a flowchart");
  render_cmd->add_option("--formula", formula_path, "Formula file")->required();
  render_cmd->add_option("--format", format_name, "dot|ascii");
  render_cmd->add_option("--grammar", grammar_path, "Grammar config file");
  render_cmd->add_option("--out", out_path, "Output file");
  render_cmd->callback([&] {
    GrammarConfig grammar =
        grammar_path.empty() ? GrammarConfig{} : read_grammar_file(grammar_path);
    PredicateSet preds = enumerate_predicates(grammar);
    EnvironmentSpec env = make_environment(read_formula_env(formula_path));
    Formula f = read_formula_file(formula_path, preds);
    FlowTree tree = formula_to_tree(f, preds, env);
    emit(render(tree, render_format_from_name(format_name)), out_path);
  });

  // --- agreement ---
  std::string traj_path;
  int simulations = 1000;
  auto* agree_cmd = app.add_subcommand("agreement",
                                       "Click agreement of trajectories with a formula");
  agree_cmd->add_option("--formula", formula_path, "Formula file")->required();
  agree_cmd->add_option("--trajectories", traj_path, "Demonstrations file")->required();
  agree_cmd->add_option("--simulations", simulations, "Strategy rollouts");
  agree_cmd->add_option("--grammar", grammar_path, "Grammar config file");
  agree_cmd->add_option("--seed", seed, "Seed for strategy rollouts");
  agree_cmd->add_option("--out", out_path, "Report file");
  agree_cmd->callback([&] {
    GrammarConfig grammar =
        grammar_path.empty() ? GrammarConfig{} : read_grammar_file(grammar_path);
    PredicateSet preds = enumerate_predicates(grammar);
    EnvironmentSpec env;
    DemonstrationSet demos = read_demos_file(traj_path, env);
    Formula f = read_formula_file(formula_path, preds);
    ordered_json doc;
    ordered_json per = ordered_json::array();
    double total = 0;
    for (const auto& t : demos.trajectories) {
      double a = click_agreement(t, f, preds, env, simulations, seed);
      per.push_back(a);
      total += a;
    }
    doc["formula"] = f.to_text(preds);
    doc["simulations"] = simulations;
    doc["mean_agreement"] =
        demos.trajectories.empty() ? 1.0 : total / double(demos.trajectories.size());
    doc["per_trajectory"] = std::move(per);
    emit(doc.dump(2) + "\n", out_path);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
