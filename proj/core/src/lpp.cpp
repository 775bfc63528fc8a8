#include "mouselab/lpp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mouselab {

namespace {
constexpr double kNegInf = -1e18;
}

bool Formula::is_true() const {
  for (const auto& d : disjuncts)
    if (d.empty()) return true;
  return false;
}

size_t Formula::literal_count() const {
  size_t n = 0;
  for (const auto& d : disjuncts) n += d.size();
  return n;
}

size_t Formula::distinct_predicates() const {
  std::set<int> s;
  for (const auto& d : disjuncts)
    for (const auto& l : d) s.insert(l.pred);
  return s.size();
}

Formula Formula::canonical() const {
  std::vector<std::vector<Literal>> ds;
  for (auto d : disjuncts) {
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    bool contradiction = false;
    for (size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i].pred == d[i + 1].pred) contradiction = true;
    if (contradiction) continue;
    if (d.empty()) return Formula::True();
    ds.push_back(std::move(d));
  }
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  Formula f;
  f.disjuncts = std::move(ds);
  return f;
}

uint64_t Formula::digest() const {
  Formula c = canonical();
  uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  feed(c.disjuncts.size());
  for (const auto& d : c.disjuncts) {
    feed(0xD15Cull);
    for (const auto& l : d) feed(uint64_t(l.pred) << 1 | (l.negated ? 1 : 0));
  }
  return h;
}

std::string Formula::to_text(const PredicateSet& preds) const {
  Formula c = canonical();
  if (c.is_false()) return "false";
  if (c.is_true()) return "true";
  std::string out;
  for (size_t i = 0; i < c.disjuncts.size(); ++i) {
    if (i) out += " | ";
    out += "(";
    for (size_t j = 0; j < c.disjuncts[i].size(); ++j) {
      if (j) out += " & ";
      const Literal& l = c.disjuncts[i][j];
      if (l.negated) out += "!";
      out += predicate_to_text(preds[l.pred]);
    }
    out += ")";
  }
  return out;
}

namespace {

std::string trim_ws(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

// Split on a separator character, but only at parenthesis depth 0.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Formula Formula::from_text(const std::string& text, const PredicateSet& preds) {
  std::string t = trim_ws(text);
  if (t == "false") return Formula::False();
  if (t == "true") return Formula::True();
  Formula f;
  for (const auto& disj_raw : split_top(t, '|')) {
    std::string disj = trim_ws(disj_raw);
    if (disj.size() >= 2 && disj.front() == '(' && disj.back() == ')')
      disj = trim_ws(disj.substr(1, disj.size() - 2));
    std::vector<Literal> conj;
    for (const auto& lit_raw : split_top(disj, '&')) {
      std::string lit = trim_ws(lit_raw);
      Literal l;
      if (!lit.empty() && lit[0] == '!') {
        l.negated = true;
        lit = trim_ws(lit.substr(1));
      }
      l.pred = find_predicate(preds, lit);
      if (l.pred < 0)
        throw std::invalid_argument("predicate not in active set: " + lit);
      conj.push_back(l);
    }
    f.disjuncts.push_back(std::move(conj));
  }
  return f.canonical();
}

bool Formula::accepts(const PredicateSet& preds, const EvalContext& ctx,
                      Computation click) const {
  for (const auto& d : disjuncts) {
    bool ok = true;
    for (const auto& l : d)
      if (evaluate(preds[l.pred], ctx, click) == l.negated) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

bool Formula::eval_assignment(const std::vector<bool>& assignment) const {
  for (const auto& d : disjuncts) {
    bool ok = true;
    for (const auto& l : d)
      if (assignment[l.pred] == l.negated) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Decision tree induction

bool DecisionTree::classify(const std::vector<bool>& assignment) const {
  if (nodes.empty()) return false;
  int i = 0;
  while (nodes[i].pred >= 0)
    i = assignment[nodes[i].pred] ? nodes[i].hi : nodes[i].lo;
  return nodes[i].label == 1;
}

namespace {

struct Induction {
  const BinaryMatrix* m;
  std::vector<uint64_t> labels;  // bitset over rows
  int max_depth;
  DecisionTree tree;

  size_t words() const { return m->words_per_col; }

  size_t count(const std::vector<uint64_t>& mask) const {
    size_t c = 0;
    for (uint64_t w : mask) c += std::popcount(w);
    return c;
  }
  size_t count_pos(const std::vector<uint64_t>& mask) const {
    size_t c = 0;
    for (size_t i = 0; i < mask.size(); ++i) c += std::popcount(mask[i] & labels[i]);
    return c;
  }

  static double gini(size_t pos, size_t n) {
    if (n == 0) return 0;
    double p = double(pos) / double(n);
    return 2 * p * (1 - p);
  }

  int build(std::vector<uint64_t> mask, std::vector<char> used, int depth) {
    size_t n = count(mask), pos = count_pos(mask);
    tree.depth = std::max(tree.depth, depth);
    auto leaf = [&](int label) {
      tree.nodes.push_back({-1, -1, -1, label});
      return int(tree.nodes.size() - 1);
    };
    if (n == 0) return leaf(0);
    if (pos == 0 || pos == n || depth >= max_depth) return leaf(pos * 2 > n ? 1 : 0);

    double parent_impurity = gini(pos, n);
    double best_gain = 1e-12;
    int best_col = -1;
    std::vector<uint64_t> hi(words());
    for (size_t c = 0; c < m->cols; ++c) {
      if (used[c]) continue;
      const uint64_t* col = m->col(c);
      size_t nh = 0, ph = 0;
      for (size_t w = 0; w < words(); ++w) {
        uint64_t x = mask[w] & col[w];
        nh += std::popcount(x);
        ph += std::popcount(x & labels[w]);
      }
      if (nh == 0 || nh == n) continue;
      size_t nl = n - nh, pl = pos - ph;
      double gain = parent_impurity - (double(nh) / n) * gini(ph, nh) -
                    (double(nl) / n) * gini(pl, nl);
      if (gain > best_gain) {
        best_gain = gain;
        best_col = int(c);
      }
    }
    if (best_col < 0) return leaf(pos * 2 > n ? 1 : 0);

    const uint64_t* col = m->col(size_t(best_col));
    std::vector<uint64_t> lo(words());
    for (size_t w = 0; w < words(); ++w) {
      hi[w] = mask[w] & col[w];
      lo[w] = mask[w] & ~col[w];
    }
    used[best_col] = 1;
    int self = int(tree.nodes.size());
    tree.nodes.push_back({best_col, -1, -1, -1});
    tree.nodes[self].lo = build(std::move(lo), used, depth + 1);
    tree.nodes[self].hi = build(std::move(hi), used, depth + 1);
    return self;
  }
};

}  // namespace

DecisionTree induce_tree(const BinaryMatrix& features,
                         const std::vector<bool>& labels, int max_depth) {
  if (features.rows != labels.size())
    throw std::invalid_argument("labels/rows size mismatch");
  Induction ind;
  ind.m = &features;
  ind.max_depth = max_depth;
  ind.labels.assign(features.words_per_col, 0);
  for (size_t r = 0; r < labels.size(); ++r)
    if (labels[r]) ind.labels[r / 64] |= uint64_t(1) << (r % 64);
  if (features.rows == 0) return DecisionTree{};
  std::vector<uint64_t> all(features.words_per_col, 0);
  for (size_t r = 0; r < features.rows; ++r) all[r / 64] |= uint64_t(1) << (r % 64);
  ind.build(std::move(all), std::vector<char>(features.cols, 0), 0);
  return ind.tree;
}

Formula extract_dnf(const DecisionTree& tree) {
  Formula f;
  if (tree.nodes.empty()) return f;
  std::vector<Literal> path;
  auto dfs = [&](auto&& self, int i) -> void {
    const TreeNode& nd = tree.nodes[i];
    if (nd.pred < 0) {
      if (nd.label == 1) f.disjuncts.push_back(path);
      return;
    }
    path.push_back({nd.pred, true});
    self(self, nd.lo);
    path.back().negated = false;
    self(self, nd.hi);
    path.pop_back();
  };
  dfs(dfs, 0);
  return f.canonical();
}

// ---------------------------------------------------------------------------
// Policy and likelihood

std::vector<Computation> FormulaPolicy::accepted(Belief b, int prev_click) const {
  EvalContext ctx(*env_, b, prev_click);
  std::vector<Computation> out;
  for (int n = 1; n <= env_->tree.node_count; ++n)
    if (!env_->observed(b, n) &&
        formula_.accepts(*preds_, ctx, Computation::click(n)))
      out.push_back(Computation::click(n));
  return out;
}

Computation FormulaPolicy::act(Belief b, int prev_click, std::mt19937_64& rng) {
  auto a = accepted(b, prev_click);
  if (a.empty()) return Computation::terminate();
  if (a.size() == 1) return a[0];
  return a[std::uniform_int_distribution<size_t>(0, a.size() - 1)(rng)];
}

double demo_log_likelihood(const Formula& f, const std::vector<DemoPair>& pairs,
                           const PredicateSet& preds, const EnvironmentSpec& env) {
  Formula c = f.canonical();
  double ll = 0;
  for (const auto& p : pairs) {
    EvalContext ctx(env, p.belief, p.prev_click);
    int accepted = 0;
    bool action_accepted = false;
    for (int n = 1; n <= env.tree.node_count; ++n) {
      if (env.observed(p.belief, n)) continue;
      if (c.accepts(preds, ctx, Computation::click(n))) {
        ++accepted;
        if (p.action == Computation::click(n)) action_accepted = true;
      }
    }
    if (p.action.is_click()) {
      if (!action_accepted) return kNegInf;
      ll -= std::log(double(accepted));
    } else {
      if (accepted != 0) return kNegInf;
    }
  }
  return ll;
}

double formula_log_prior(const Formula& f, double lambda) {
  return -lambda * double(f.canonical().literal_count());
}

LppResult lpp_map(const std::vector<DemoPair>& train_pairs,
                  const std::vector<DemoPair>& validation_pairs,
                  const std::vector<NegativeExample>& negatives,
                  const PredicateSet& preds, const EnvironmentSpec& env,
                  int max_depth, double lambda, FeatureCache* cache) {
  std::vector<FeaturizedRow> rows;
  std::vector<bool> labels;
  for (const auto& p : train_pairs) {
    if (!p.action.is_click()) continue;
    rows.push_back({p.belief, p.action, p.prev_click});
    labels.push_back(true);
  }
  for (const auto& n : negatives) {
    rows.push_back({n.belief, n.action, n.prev_click});
    labels.push_back(false);
  }
  LppResult result;
  if (rows.empty()) return result;
  BinaryMatrix m = featurize(rows, preds, env, cache);
  Formula f = extract_dnf(induce_tree(m, labels, max_depth));
  if (f.is_false()) return result;
  double ll = demo_log_likelihood(f, validation_pairs, preds, env);
  if (ll <= kNegInf) return result;
  result.formula = f;
  result.log_likelihood = ll;
  result.log_posterior = formula_log_prior(f, lambda) + ll;
  return result;
}

}  // namespace mouselab
