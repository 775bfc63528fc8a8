#include "mouselab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mouselab/rng.hpp"

namespace mouselab {

bool FlowTree::classify(const std::vector<bool>& assignment) const {
  if (nodes.empty()) return false;
  int i = 0;
  while (nodes[i].terminal < 0)
    i = assignment[size_t(nodes[i].pred)] ? nodes[i].yes : nodes[i].no;
  return nodes[i].terminal == 1;
}

namespace {

struct TreeBuilder {
  const PredicateSet* preds;
  const EnvironmentSpec* env;
  FlowTree tree;

  int terminal(int label) {
    FlowNode n;
    n.terminal = label;
    n.text = label == 1 ? "Click it" : "Don't click it";
    tree.nodes.push_back(n);
    return int(tree.nodes.size() - 1);
  }

  // Recursively split on the first literal of the first (canonically
  // smallest) disjunct; shared prefixes merge by construction.
  int build(std::vector<std::vector<Literal>> disjuncts, size_t qdepth) {
    tree.depth = std::max(tree.depth, qdepth);
    if (disjuncts.empty()) return terminal(0);
    for (const auto& d : disjuncts)
      if (d.empty()) return terminal(1);
    Literal pivot = disjuncts[0][0];
    pivot.negated = false;  // split on the predicate itself
    std::vector<std::vector<Literal>> when_true, when_false;
    for (const auto& d : disjuncts) {
      std::vector<Literal> t, f;
      bool in_true = true, in_false = true;
      for (const auto& l : d) {
        if (l.pred == pivot.pred) {
          (l.negated ? in_true : in_false) = false;
        } else {
          t.push_back(l);
          f.push_back(l);
        }
      }
      if (in_true) when_true.push_back(std::move(t));
      if (in_false) when_false.push_back(std::move(f));
    }
    FlowNode q;
    q.pred = pivot.pred;
    q.text = english((*preds)[size_t(pivot.pred)], *env);
    tree.nodes.push_back(q);
    int self = int(tree.nodes.size() - 1);
    ++tree.node_count;
    int yes = build(std::move(when_true), qdepth + 1);
    int no = build(std::move(when_false), qdepth + 1);
    tree.nodes[size_t(self)].yes = yes;
    tree.nodes[size_t(self)].no = no;
    return self;
  }
};

}  // namespace

FlowTree formula_to_tree(const Formula& formula, const PredicateSet& preds,
                         const EnvironmentSpec& env) {
  TreeBuilder b{&preds, &env, {}};
  Formula c = formula.canonical();
  // Build from node 0 down; build() appends the root first.
  b.build(c.disjuncts, 0);
  return b.tree;
}

RenderFormat render_format_from_name(const std::string& name) {
  if (name == "dot") return RenderFormat::Dot;
  if (name == "ascii") return RenderFormat::Ascii;
  throw std::invalid_argument("unknown render format: " + name);
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void render_ascii(const FlowTree& t, int i, int indent, std::ostringstream& os) {
  const FlowNode& n = t.nodes[size_t(i)];
  std::string pad(size_t(indent) * 2, ' ');
  if (n.terminal >= 0) {
    os << pad << "-> " << n.text << "\n";
    return;
  }
  os << pad << n.text << "\n";
  os << pad << "yes:\n";
  render_ascii(t, n.yes, indent + 1, os);
  os << pad << "no:\n";
  render_ascii(t, n.no, indent + 1, os);
}

}  // namespace

std::string render(const FlowTree& tree, RenderFormat format) {
  std::ostringstream os;
  if (format == RenderFormat::Dot) {
    os << "digraph flowchart {\n";
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
      const FlowNode& n = tree.nodes[i];
      os << "  n" << i << " [label=\"" << dot_escape(n.text) << "\" shape="
         << (n.terminal >= 0 ? "oval" : "box") << "];\n";
    }
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
      const FlowNode& n = tree.nodes[i];
      if (n.terminal >= 0) continue;
      os << "  n" << i << " -> n" << n.yes << " [label=\"yes\"];\n";
      os << "  n" << i << " -> n" << n.no << " [label=\"no\"];\n";
    }
    os << "}\n";
  } else {
    if (tree.nodes.empty()) return "";
    render_ascii(tree, 0, 0, os);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Reference strategies (the published flowcharts, hand-coded)

namespace {

std::vector<int> unobserved_of_level(const EnvironmentSpec& env, Belief b, int level) {
  std::vector<int> out;
  for (int n = 1; n <= env.tree.node_count; ++n)
    if (env.tree.level[n] == level && !env.observed(b, n)) out.push_back(n);
  return out;
}

Computation pick(const std::vector<int>& nodes, std::mt19937_64& rng) {
  if (nodes.empty()) return Computation::terminate();
  if (nodes.size() == 1) return Computation::click(nodes[0]);
  return Computation::click(
      nodes[std::uniform_int_distribution<size_t>(0, nodes.size() - 1)(rng)]);
}

// Click the deepest unobserved nodes until the best possible reward shows up.
class IncreasingReference : public Policy {
 public:
  explicit IncreasingReference(const EnvironmentSpec& env) : env_(&env) {}
  Computation act(Belief b, int prev_click, std::mt19937_64& rng) override {
    if (prev_click > 0 && env_->value_code(b, prev_click) == env_->global_max())
      return Computation::terminate();
    int deepest = 0;
    for (int n = 1; n <= env_->tree.node_count; ++n)
      if (!env_->observed(b, n)) deepest = std::max(deepest, env_->tree.level[n]);
    if (deepest == 0) return Computation::terminate();
    return pick(unobserved_of_level(*env_, b, deepest), rng);
  }

 private:
  const EnvironmentSpec* env_;
};

// Click the three immediate outcomes, then act.
class DecreasingReference : public Policy {
 public:
  explicit DecreasingReference(const EnvironmentSpec& env) : env_(&env) {}
  Computation act(Belief b, int, std::mt19937_64& rng) override {
    return pick(unobserved_of_level(*env_, b, 1), rng);
  }

 private:
  const EnvironmentSpec* env_;
};

// Click inner nodes on the best expected path until a +10 appears; inspect
// the leaves above it; stop if the best path runs through it, else resume.
class ConstantReference : public Policy {
 public:
  explicit ConstantReference(const EnvironmentSpec& env) : env_(&env) {}
  void reset() override {
    anchor_ = 0;
    used_.clear();
  }
  Computation act(Belief b, int, std::mt19937_64& rng) override {
    const TreeStructure& t = env_->tree;
    int leaf_level = t.max_level();
    if (anchor_ == 0) {
      for (int n = 1; n <= t.node_count; ++n)
        if (env_->observed(b, n) && t.level[n] < leaf_level &&
            env_->value_code(b, n) == env_->level_max(t.level[n]) &&
            std::find(used_.begin(), used_.end(), n) == used_.end()) {
          anchor_ = n;
          break;
        }
    }
    if (anchor_ != 0) {
      std::vector<int> pending;
      for (const auto& p : t.paths) {
        if (std::find(p.begin(), p.end(), anchor_) == p.end()) continue;
        for (int n : p)
          if (t.level[n] == leaf_level && !env_->observed(b, n))
            pending.push_back(n);
      }
      std::sort(pending.begin(), pending.end());
      pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
      if (!pending.empty()) return pick(pending, rng);
      if (on_best_path(b, anchor_)) return Computation::terminate();
      used_.push_back(anchor_);
      anchor_ = 0;
    }
    std::vector<int> cand;
    double best = termination_reward(*env_, b);
    for (const auto& p : t.paths) {
      double s = 0;
      for (int n : p) s += env_->value_code(b, n);
      if (s != best) continue;
      for (int n : p)
        if (t.level[n] < leaf_level && !env_->observed(b, n)) cand.push_back(n);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return pick(cand, rng);
  }

 private:
  bool on_best_path(Belief b, int node) const {
    double best = termination_reward(*env_, b);
    for (const auto& p : env_->tree.paths) {
      double s = 0;
      for (int n : p) s += env_->value_code(b, n);
      if (s == best && std::find(p.begin(), p.end(), node) != p.end()) return true;
    }
    return false;
  }
  const EnvironmentSpec* env_;
  int anchor_ = 0;
  std::vector<int> used_;
};

}  // namespace

std::unique_ptr<Policy> reference_policy(EnvKind kind) {
  static const EnvironmentSpec inc = make_environment(EnvKind::Increasing);
  static const EnvironmentSpec dec = make_environment(EnvKind::Decreasing);
  static const EnvironmentSpec con = make_environment(EnvKind::Constant);
  switch (kind) {
    case EnvKind::Increasing: return std::make_unique<IncreasingReference>(inc);
    case EnvKind::Decreasing: return std::make_unique<DecreasingReference>(dec);
    case EnvKind::Constant: return std::make_unique<ConstantReference>(con);
    default:
      throw std::invalid_argument("no published flowchart for this environment");
  }
}

double click_agreement(const Trajectory& trajectory, const Formula& formula,
                       const PredicateSet& preds, const EnvironmentSpec& env,
                       int simulations, uint64_t seed) {
  if (simulations < 1) throw std::invalid_argument("simulations must be >= 1");
  FormulaPolicy policy(formula, preds, env);
  long consistent = 0, inconsistent = 0, clicks = 0;
  for (const auto& step : trajectory.steps) {
    if (!step.action.is_click()) continue;
    ++clicks;
    EvalContext ctx(env, step.belief, step.prev_click);
    if (formula.canonical().accepts(preds, ctx, step.action)) ++consistent;
    else ++inconsistent;
  }
  double total_strategy_clicks = 0;
  for (int i = 0; i < simulations; ++i) {
    auto rng = make_rng(seed, uint64_t(i));
    Trajectory t = sample_trajectory(env, policy, rng);
    total_strategy_clicks += double(t.steps.size() - 1);
  }
  long mean_clicks = std::lround(total_strategy_clicks / double(simulations));
  inconsistent += std::max(0l, mean_clicks - clicks);
  if (consistent + inconsistent == 0) return 1.0;
  return double(consistent) / double(consistent + inconsistent);
}

// ---------------------------------------------------------------------------
// Pipeline

PipelineConfig::PipelineConfig() {
  for (int n = 2; n <= 30; ++n) grid.push_back(n);
}

CandidateSet discover(EnvKind kind, const PipelineConfig& config) {
  EnvironmentSpec env = make_environment(kind);
  ValueTable table = solve(env);
  double m = table.value(Belief(0));  // max_c Q(b0, c)

  ExpertPolicy expert(table);  // exact ties; tie_epsilon only widens negatives
  DemonstrationSet demos =
      generate_demonstrations(env, expert, config.x, config.base.seed);
  demos.scale = config.x;
  PredicateSet preds = enumerate_predicates(config.grammar);

  CandidateSet out;
  out.mean_expert_reward = m;
  std::vector<int> candidates;
  if (config.clusters_override) {
    candidates.push_back(*config.clusters_override);
  } else {
    FeatureCache cache(preds, env);
    ClusterValueOptions vopts;
    vopts.max_depth = config.base.max_depth;
    vopts.split = config.base.split;
    vopts.lambda = config.base.lambda;
    vopts.seed = config.base.seed;
    vopts.geometric = config.base.geometric_likelihood;
    vopts.cache = &cache;
    ElbowResult elbow =
        elbow_candidates(demos.pairs(), preds, env, config.grid,
                         config.base.cut_size, config.K, vopts);
    out.elbow_curve = elbow.curve;
    out.no_elbow = elbow.no_elbow;
    candidates = elbow.candidates;
  }
  for (size_t k = 0; k < candidates.size(); ++k) {
    InterpretConfig cfg = config.base;
    cfg.clusters = candidates[k];
    cfg.mean_expert_reward = m;
    cfg.seed = mix64(config.base.seed ^ (0xCAFE + k));
    InterpretResult r = ai_interpret(demos, preds, env, table, cfg);
    if (r.found) {
      PipelineCandidate c;
      c.clusters = candidates[k];
      c.formula = r.formula;
      c.tree = formula_to_tree(r.formula, preds, env);
      c.perf_ratio = r.perf_ratio;
      out.candidates.push_back(std::move(c));
    } else {
      out.diagnostics.push_back("N=" + std::to_string(candidates[k]) + ": " + r.reason);
    }
  }
  return out;
}

const PipelineCandidate& select_tree(const CandidateSet& set,
                                     const PredicateSet& preds) {
  if (set.candidates.empty())
    throw std::invalid_argument("empty candidate set");
  const PipelineCandidate* best = nullptr;
  std::string best_text;
  for (const auto& c : set.candidates) {
    std::string text = c.formula.to_text(preds);
    bool better =
        !best || c.tree.node_count < best->tree.node_count ||
        (c.tree.node_count == best->tree.node_count &&
         (c.tree.depth < best->tree.depth ||
          (c.tree.depth == best->tree.depth && text < best_text)));
    if (better) {
      best = &c;
      best_text = text;
    }
  }
  return *best;
}

// FormulaStats lives in the lpp header but needs formula_to_tree; the flow
// tree here is built against a throwaway environment-independent rendering.
FormulaStats formula_stats(const Formula& f) {
  FormulaStats s;
  Formula c = f.canonical();
  s.distinct_predicates = c.distinct_predicates();
  s.literal_count = c.literal_count();
  for (const auto& d : c.disjuncts) s.depth = std::max(s.depth, d.size());
  // Build the question tree shape only; texts are irrelevant to the count.
  struct ShapeBuilder {
    size_t count = 0;
    void build(std::vector<std::vector<Literal>> disjuncts) {
      if (disjuncts.empty()) return;
      for (const auto& d : disjuncts)
        if (d.empty()) return;
      Literal pivot = disjuncts[0][0];
      std::vector<std::vector<Literal>> when_true, when_false;
      for (const auto& d : disjuncts) {
        std::vector<Literal> t, fl;
        bool in_true = true, in_false = true;
        for (const auto& l : d) {
          if (l.pred == pivot.pred) (l.negated ? in_true : in_false) = false;
          else { t.push_back(l); fl.push_back(l); }
        }
        if (in_true) when_true.push_back(std::move(t));
        if (in_false) when_false.push_back(std::move(fl));
      }
      ++count;
      build(std::move(when_true));
      build(std::move(when_false));
    }
  } shape;
  shape.build(c.disjuncts);
  s.equivalent_tree_nodes = shape.count;
  return s;
}

}  // namespace mouselab
