#include "mouselab/dsl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mouselab {

Predicate Predicate::make_base(int b) {
  Predicate p;
  p.kind = PredKind::Base;
  p.base = b;
  return p;
}
Predicate Predicate::make_general(int g) {
  Predicate p;
  p.kind = PredKind::General;
  p.general = g;
  return p;
}
Predicate Predicate::make_among(std::vector<BaseLit> conj) {
  Predicate p;
  p.kind = PredKind::Among;
  p.conj = std::move(conj);
  return p;
}
Predicate Predicate::make_among_with(std::vector<BaseLit> conj, int among) {
  Predicate p;
  p.kind = PredKind::AmongWith;
  p.conj = std::move(conj);
  p.among = among;
  return p;
}
Predicate Predicate::make_all_with(std::vector<BaseLit> conj, int among) {
  Predicate p;
  p.kind = PredKind::AllWith;
  p.conj = std::move(conj);
  p.among = among;
  return p;
}
Predicate Predicate::make_not(Predicate inner) {
  Predicate p;
  p.kind = PredKind::Not;
  p.inner = std::make_shared<Predicate>(std::move(inner));
  return p;
}

const std::vector<std::string>& base_pred_names() {
  static const std::vector<std::string> names = {
      "is_observed", "has_largest_depth", "has_smallest_depth", "depth_eq_2",
      "is_root_child", "has_parent_observed", "has_child_observed",
      "is_on_best_expected_path", "has_best_path_through_max",
      "is_positive_observed", "sibling_observed", "branch_fully_observed",
      "all_leaves_of_branch_observed", "is_successor_of_max_observed"};
  return names;
}

const std::vector<std::string>& general_pred_names() {
  static const std::vector<std::string> names = {
      "is_previous_observed_max", "is_previous_observed_min",
      "is_previous_observed_positive", "exists_observed_max",
      "exists_observed_min", "count_observed_ge_1", "count_observed_ge_3",
      "count_observed_ge_6", "count_observed_ge_9", "all_level1_observed",
      "all_leaves_observed", "best_path_value_positive",
      "max_observed_on_best_path", "no_click_made_yet",
      "previous_click_same_branch"};
  return names;
}

const std::vector<std::string>& among_pred_names() {
  static const std::vector<std::string> names = {
      "has_largest_depth", "has_smallest_depth", "has_best_expected_total",
      "is_closest_to_root", "is_closest_to_max_observed",
      "has_parent_observed", "has_child_observed",
      "has_largest_level_variance", "is_sibling_of_previous",
      "lies_on_previous_path", "has_positive_parent", "has_unobserved_sibling"};
  return names;
}

static int vocab_index(const std::vector<std::string>& vocab, const std::string& name) {
  auto it = std::find(vocab.begin(), vocab.end(), name);
  if (it == vocab.end()) throw std::invalid_argument("unknown predicate name: " + name);
  return int(it - vocab.begin());
}

// ---------------------------------------------------------------------------
// Evaluation

EvalContext::EvalContext(const EnvironmentSpec& e, Belief b, int prev)
    : env(&e), belief(b), prev_click(prev) {
  const TreeStructure& t = e.tree;
  max_level = t.max_level();
  for (int n = 1; n <= t.node_count; ++n) {
    values[n] = e.value_code(b, n);
    if (e.observed(b, n)) {
      observed_mask |= 1u << (n - 1);
      ++observed_cnt;
      if (values[n] == e.level_max(t.level[n])) level_max_mask |= 1u << (n - 1);
    }
  }
  size_t np = t.paths.size();
  std::vector<double> sums(np, 0.0);
  best_sum = -1e18;
  for (size_t i = 0; i < np; ++i) {
    for (int n : t.paths[i]) sums[i] += values[n];
    best_sum = std::max(best_sum, sums[i]);
  }
  for (int n = 1; n <= t.node_count; ++n) best_through[n] = -1e18;
  for (size_t i = 0; i < np; ++i)
    for (int n : t.paths[i]) best_through[n] = std::max(best_through[n], sums[i]);
  for (size_t i = 0; i < np; ++i) {
    if (sums[i] != best_sum) continue;
    bool via_max = false;
    for (int n : t.paths[i]) via_max |= (level_max_mask >> (n - 1)) & 1;
    for (int n : t.paths[i]) {
      on_best_mask |= 1u << (n - 1);
      if (!via_max) best_via_max_mask |= 1u << (n - 1);  // temp: "missed by some best path"
    }
  }
  best_via_max_mask = on_best_mask & ~best_via_max_mask;
  for (int n = 1; n <= t.node_count; ++n)
    for (int a = t.parent[n]; a != 0; a = t.parent[a])
      if ((level_max_mask >> (a - 1)) & 1) { succ_max_mask |= 1u << (n - 1); break; }
}

namespace {

inline bool bit(uint32_t mask, int node) { return (mask >> (node - 1)) & 1; }

bool base_eval(const EvalContext& c, int base, int n) {
  const TreeStructure& t = c.env->tree;
  switch (base) {
    case 0: return bit(c.observed_mask, n);
    case 1: return t.level[n] == c.max_level;
    case 2: return t.level[n] == 1;
    case 3: return t.level[n] == 2;
    case 4: return t.parent[n] == 0;
    case 5: return t.parent[n] != 0 && bit(c.observed_mask, t.parent[n]);
    case 6:
      for (int ch : t.children[n])
        if (bit(c.observed_mask, ch)) return true;
      return false;
    case 7: return bit(c.on_best_mask, n);
    case 8: return bit(c.best_via_max_mask, n);
    case 9: return bit(c.observed_mask, n) && c.values[n] > 0;
    case 10:
      for (int s : t.children[t.parent[n]])
        if (s != n && bit(c.observed_mask, s)) return true;
      return false;
    case 11:
      for (int m : t.branches[t.branch_of[n]])
        if (!bit(c.observed_mask, m)) return false;
      return true;
    case 12:
      for (int m : t.branches[t.branch_of[n]])
        if (t.children[m].empty() && !bit(c.observed_mask, m)) return false;
      return true;
    case 13: return bit(c.succ_max_mask, n);
  }
  throw std::logic_error("bad base predicate index");
}

double level_variance(const EnvironmentSpec& env, int level) {
  const auto& s = env.support[level - 1];
  double mean = 0;
  for (int v : s) mean += v;
  mean /= double(s.size());
  double var = 0;
  for (int v : s) var += (v - mean) * (v - mean);
  return var / double(s.size());
}

bool on_common_path(const TreeStructure& t, int a, int b) {
  for (const auto& p : t.paths) {
    bool ha = false, hb = false;
    for (int n : p) { ha |= n == a; hb |= n == b; }
    if (ha && hb) return true;
  }
  return false;
}

bool among_eval(const EvalContext& c, int among, int n, uint32_t set) {
  if (!bit(set, n)) return false;
  const TreeStructure& t = c.env->tree;
  auto for_set = [&](auto&& f) {
    for (int m = 1; m <= t.node_count; ++m)
      if (bit(set, m)) f(m);
  };
  switch (among) {
    case 0: {  // has_largest_depth
      int best = 0;
      for_set([&](int m) { best = std::max(best, t.level[m]); });
      return t.level[n] == best;
    }
    case 1:
    case 3: {  // has_smallest_depth / is_closest_to_root
      int best = 1 << 20;
      for_set([&](int m) { best = std::min(best, t.level[m]); });
      return t.level[n] == best;
    }
    case 2: {  // has_best_expected_total
      double best = -1e18;
      for_set([&](int m) { best = std::max(best, c.best_through[m]); });
      return c.best_through[n] == best;
    }
    case 4: {  // is_closest_to_max_observed
      if (!c.level_max_mask) return false;
      auto d = [&](int m) {
        int dd = 1 << 20;
        for (int x = 1; x <= t.node_count; ++x)
          if (bit(c.level_max_mask, x)) dd = std::min(dd, t.dist[m][x]);
        return dd;
      };
      int best = 1 << 20;
      for_set([&](int m) { best = std::min(best, d(m)); });
      return d(n) == best;
    }
    case 5: return base_eval(c, 5, n);
    case 6: return base_eval(c, 6, n);
    case 7: {  // has_largest_level_variance
      double best = -1;
      for_set([&](int m) { best = std::max(best, level_variance(*c.env, t.level[m])); });
      return level_variance(*c.env, t.level[n]) == best;
    }
    case 8:
      return c.prev_click > 0 && n != c.prev_click &&
             t.parent[n] == t.parent[c.prev_click];
    case 9: return c.prev_click > 0 && on_common_path(t, n, c.prev_click);
    case 10:
      return t.parent[n] != 0 && bit(c.observed_mask, t.parent[n]) &&
             c.values[t.parent[n]] > 0;
    case 11:
      for (int s : t.children[t.parent[n]])
        if (s != n && !bit(c.observed_mask, s)) return true;
      return false;
  }
  throw std::logic_error("bad among predicate index");
}

bool general_eval(const EvalContext& c, int g, Computation click) {
  const EnvironmentSpec& e = *c.env;
  const TreeStructure& t = e.tree;
  switch (g) {
    case 0: return c.prev_click > 0 && c.values[c.prev_click] == e.global_max();
    case 1: return c.prev_click > 0 && c.values[c.prev_click] == e.global_min();
    case 2: return c.prev_click > 0 && c.values[c.prev_click] > 0;
    case 3:
      for (int n = 1; n <= t.node_count; ++n)
        if (bit(c.observed_mask, n) && c.values[n] == e.global_max()) return true;
      return false;
    case 4:
      for (int n = 1; n <= t.node_count; ++n)
        if (bit(c.observed_mask, n) && c.values[n] == e.global_min()) return true;
      return false;
    case 5: return c.observed_cnt >= 1;
    case 6: return c.observed_cnt >= 3;
    case 7: return c.observed_cnt >= 6;
    case 8: return c.observed_cnt >= 9;
    case 9:
      for (int n = 1; n <= t.node_count; ++n)
        if (t.level[n] == 1 && !bit(c.observed_mask, n)) return false;
      return true;
    case 10:
      for (int n = 1; n <= t.node_count; ++n)
        if (t.children[n].empty() && !bit(c.observed_mask, n)) return false;
      return true;
    case 11: return c.best_sum > 0;
    case 12: return (c.level_max_mask & c.on_best_mask) != 0;
    case 13: return c.observed_cnt == 0;
    case 14:
      return c.prev_click > 0 && click.is_click() &&
             t.branch_of[click.node()] == t.branch_of[c.prev_click];
  }
  throw std::logic_error("bad general predicate index");
}

uint32_t conj_mask(const EvalContext& c, const std::vector<BaseLit>& conj) {
  uint32_t set = (1u << c.env->tree.node_count) - 1;
  for (const auto& lit : conj) {
    uint32_t m = 0;
    for (int n = 1; n <= c.env->tree.node_count; ++n)
      if (base_eval(c, lit.base, n) != lit.negated) m |= 1u << (n - 1);
    set &= m;
  }
  return set;
}

}  // namespace

bool evaluate(const Predicate& p, const EvalContext& ctx, Computation click) {
  switch (p.kind) {
    case PredKind::Base:
      return click.is_click() && base_eval(ctx, p.base, click.node());
    case PredKind::General:
      return general_eval(ctx, p.general, click);
    case PredKind::Among:
      return click.is_click() && bit(conj_mask(ctx, p.conj), click.node());
    case PredKind::AmongWith:
      return click.is_click() &&
             among_eval(ctx, p.among, click.node(), conj_mask(ctx, p.conj));
    case PredKind::AllWith: {
      uint32_t set = conj_mask(ctx, p.conj);
      for (int n = 1; n <= ctx.env->tree.node_count; ++n)
        if (bit(set, n) && !among_eval(ctx, p.among, n, set)) return false;
      return true;
    }
    case PredKind::Not:
      return !evaluate(*p.inner, ctx, click);
  }
  throw std::logic_error("bad predicate kind");
}

bool evaluate(const Predicate& p, const EnvironmentSpec& env, Belief b,
              int prev_click, Computation click) {
  return evaluate(p, EvalContext(env, b, prev_click), click);
}

size_t FeatureCache::KeyHash::operator()(const Key& k) const {
  uint64_t h = k.belief + 0x9e3779b97f4a7c15ull;
  h ^= (uint64_t(uint16_t(k.action)) << 1) ^ (uint64_t(uint16_t(k.prev)) << 17);
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return size_t(h);
}

const uint64_t* FeatureCache::row(const FeaturizedRow& r) {
  Key k{r.belief, int16_t(r.action.v), int16_t(r.prev_click)};
  auto it = index_.find(k);
  if (it == index_.end()) {
    size_t off = rows_.size();
    rows_.resize(off + words_, 0);
    EvalContext ctx(*env_, r.belief, r.prev_click);
    for (size_t c = 0; c < preds_->size(); ++c)
      if (evaluate((*preds_)[c], ctx, r.action))
        rows_[off + c / 64] |= uint64_t(1) << (c % 64);
    it = index_.emplace(k, off).first;
  }
  return rows_.data() + it->second;
}

BinaryMatrix featurize(const std::vector<FeaturizedRow>& pairs,
                       const PredicateSet& preds, const EnvironmentSpec& env,
                       FeatureCache* cache) {
  BinaryMatrix m(pairs.size(), preds.size());
  if (cache) {
    for (size_t r = 0; r < pairs.size(); ++r) {
      const uint64_t* bits = cache->row(pairs[r]);
      for (size_t w = 0; w < cache->words_per_row(); ++w) {
        uint64_t word = bits[w];
        while (word) {
          int b = std::countr_zero(word);
          word &= word - 1;
          m.set(r, w * 64 + size_t(b), true);
        }
      }
    }
    return m;
  }
  for (size_t r = 0; r < pairs.size(); ++r) {
    EvalContext ctx(env, pairs[r].belief, pairs[r].prev_click);
    for (size_t c = 0; c < preds.size(); ++c)
      if (evaluate(preds[c], ctx, pairs[r].action)) m.set(r, c, true);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Grammar

std::string GrammarConfig::to_text() const {
  std::ostringstream os;
  auto line = [&](const char* key, const std::vector<std::string>& names) {
    os << key << ":";
    for (size_t i = 0; i < names.size(); ++i) os << (i ? "," : " ") << names[i];
    os << "\n";
  };
  line("base", base);
  line("general", general);
  line("among", among);
  os << "among_width: " << among_width << "\n";
  os << "among_with_width: " << among_with_width << "\n";
  return os.str();
}

GrammarConfig GrammarConfig::from_text(const std::string& text) {
  GrammarConfig cfg;
  cfg.base.clear();
  cfg.general.clear();
  cfg.among.clear();
  std::istringstream is(text);
  std::string ln;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
    return out;
  };
  while (std::getline(is, ln)) {
    auto colon = ln.find(':');
    if (colon == std::string::npos) continue;
    std::string key = ln.substr(0, colon);
    std::string val = ln.substr(colon + 1);
    while (!val.empty() && val.front() == ' ') val.erase(val.begin());
    if (key == "base") cfg.base = split(val);
    else if (key == "general") cfg.general = split(val);
    else if (key == "among") cfg.among = split(val);
    else if (key == "among_width") cfg.among_width = std::stoi(val);
    else if (key == "among_with_width") cfg.among_with_width = std::stoi(val);
    else throw std::invalid_argument("unknown grammar key: " + key);
  }
  for (const auto& n : cfg.base) vocab_index(base_pred_names(), n);
  for (const auto& n : cfg.general) vocab_index(general_pred_names(), n);
  for (const auto& n : cfg.among) vocab_index(among_pred_names(), n);
  return cfg;
}

uint64_t GrammarConfig::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : to_text()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

PredicateSet enumerate_predicates(const GrammarConfig& config) {
  PredicateSet set;
  set.grammar_fingerprint = config.fingerprint();
  for (const auto* vocab : {&config.base, &config.general, &config.among}) {
    if (vocab->empty()) throw std::invalid_argument("empty predicate vocabulary");
    auto sorted = *vocab;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
      throw std::invalid_argument("duplicate predicate name: " + *dup);
  }
  std::vector<int> base_idx, general_idx, among_idx;
  for (const auto& n : config.base) base_idx.push_back(vocab_index(base_pred_names(), n));
  for (const auto& n : config.general)
    general_idx.push_back(vocab_index(general_pred_names(), n));
  for (const auto& n : config.among)
    among_idx.push_back(vocab_index(among_pred_names(), n));

  for (int b : base_idx) set.predicates.push_back(Predicate::make_base(b));
  for (int g : general_idx) set.predicates.push_back(Predicate::make_general(g));

  // AMONG conjunctions: every subset of size 1..w, every sign combination,
  // in config order / binary sign order.
  auto signed_conjs = [&](int width) {
    std::vector<std::vector<BaseLit>> out;
    size_t nb = base_idx.size();
    for (size_t i = 0; i < nb; ++i)
      if (width >= 1)
        for (int s = 0; s < 2; ++s)
          out.push_back({BaseLit{base_idx[i], s == 1}});
    if (width >= 2)
      for (size_t i = 0; i < nb; ++i)
        for (size_t j = i + 1; j < nb; ++j)
          for (int s = 0; s < 4; ++s)
            out.push_back({BaseLit{base_idx[i], (s & 2) != 0},
                           BaseLit{base_idx[j], (s & 1) != 0}});
    return out;
  };

  for (auto& conj : signed_conjs(config.among_width))
    set.predicates.push_back(Predicate::make_among(std::move(conj)));
  for (auto& conj : signed_conjs(config.among_with_width))
    for (int a : among_idx)
      set.predicates.push_back(Predicate::make_among_with(conj, a));
  for (auto& conj : signed_conjs(config.among_with_width))
    for (int a : among_idx)
      set.predicates.push_back(Predicate::make_all_with(conj, a));
  return set;
}

// ---------------------------------------------------------------------------
// Text form

static std::string conj_to_text(const std::vector<BaseLit>& conj) {
  std::string s;
  for (size_t i = 0; i < conj.size(); ++i) {
    if (i) s += " & ";
    if (conj[i].negated) s += "!";
    s += base_pred_names()[conj[i].base];
  }
  return s;
}

std::string predicate_to_text(const Predicate& p) {
  switch (p.kind) {
    case PredKind::Base: return base_pred_names()[p.base];
    case PredKind::General: return general_pred_names()[p.general];
    case PredKind::Among: return "among(" + conj_to_text(p.conj) + ")";
    case PredKind::AmongWith:
      return "among(" + conj_to_text(p.conj) + "; " + among_pred_names()[p.among] + ")";
    case PredKind::AllWith:
      return "all(" + conj_to_text(p.conj) + "; " + among_pred_names()[p.among] + ")";
    case PredKind::Not: return "not(" + predicate_to_text(*p.inner) + ")";
  }
  throw std::logic_error("bad predicate kind");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<BaseLit> parse_conj(const std::string& text) {
  std::vector<BaseLit> conj;
  std::istringstream is(text);
  std::string piece;
  while (std::getline(is, piece, '&')) {
    piece = trim(piece);
    BaseLit lit;
    if (!piece.empty() && piece[0] == '!') {
      lit.negated = true;
      piece = trim(piece.substr(1));
    }
    lit.base = vocab_index(base_pred_names(), piece);
    conj.push_back(lit);
  }
  if (conj.empty()) throw std::invalid_argument("empty conjunction");
  return conj;
}

}  // namespace

Predicate predicate_from_text(const std::string& raw) {
  std::string text = trim(raw);
  auto inner_of = [&](size_t prefix_len) {
    if (text.back() != ')') throw std::invalid_argument("missing ')' in: " + raw);
    return text.substr(prefix_len, text.size() - prefix_len - 1);
  };
  if (text.rfind("not(", 0) == 0)
    return Predicate::make_not(predicate_from_text(inner_of(4)));
  if (text.rfind("among(", 0) == 0) {
    std::string body = inner_of(6);
    auto semi = body.find(';');
    if (semi == std::string::npos)
      return Predicate::make_among(parse_conj(body));
    return Predicate::make_among_with(
        parse_conj(body.substr(0, semi)),
        vocab_index(among_pred_names(), trim(body.substr(semi + 1))));
  }
  if (text.rfind("all(", 0) == 0) {
    std::string body = inner_of(4);
    auto semi = body.find(';');
    if (semi == std::string::npos)
      throw std::invalid_argument("all(...) requires a selector: " + raw);
    return Predicate::make_all_with(
        parse_conj(body.substr(0, semi)),
        vocab_index(among_pred_names(), trim(body.substr(semi + 1))));
  }
  auto& bn = base_pred_names();
  if (std::find(bn.begin(), bn.end(), text) != bn.end())
    return Predicate::make_base(vocab_index(bn, text));
  return Predicate::make_general(vocab_index(general_pred_names(), text));
}

int find_predicate(const PredicateSet& set, const std::string& text) {
  Predicate want = predicate_from_text(text);
  std::string canon = predicate_to_text(want);
  for (size_t i = 0; i < set.size(); ++i)
    if (predicate_to_text(set[i]) == canon) return int(i);
  return -1;
}

// ---------------------------------------------------------------------------
// English rendering

namespace {

const char* base_phrase(int b) {
  switch (b) {
    case 0: return "observed";
    case 1: return "on the highest level";
    case 2: return "on the lowest level";
    case 3: return "on the middle level";
    case 4: return "a child of the root";
    case 5: return "a node whose parent is observed";
    case 6: return "a node with an observed child";
    case 7: return "on a best expected path";
    case 8: return "a node whose best paths all contain a maximal observed value";
    case 9: return "observed with a positive value";
    case 10: return "a node with an observed sibling";
    case 11: return "in a fully observed branch";
    case 12: return "in a branch whose leaves are all observed";
    case 13: return "a successor of a maximal observed value";
  }
  return "?";
}

const char* among_phrase(int a) {
  switch (a) {
    case 0: return "on the highest level";
    case 1: return "on the lowest level";
    case 2: return "on the path with the best expected total";
    case 3: return "closest to the root";
    case 4: return "closest to the largest observed value";
    case 5: return "a node whose parent is observed";
    case 6: return "a node with an observed child";
    case 7: return "on the level with the most variable rewards";
    case 8: return "a sibling of the previously observed node";
    case 9: return "on the same path as the previously observed node";
    case 10: return "a node whose parent shows a positive value";
    case 11: return "a node with an unobserved sibling";
  }
  return "?";
}

std::string general_question(int g, const EnvironmentSpec& env) {
  auto num = [](int v) { return std::to_string(v); };
  switch (g) {
    case 0: return "Was the previously observed value a " + num(env.global_max()) + "?";
    case 1: return "Was the previously observed value a " + num(env.global_min()) + "?";
    case 2: return "Was the previously observed value positive?";
    case 3: return "Has a " + num(env.global_max()) + " been observed?";
    case 4: return "Has a " + num(env.global_min()) + " been observed?";
    case 5: return "Has at least 1 node been observed?";
    case 6: return "Have at least 3 nodes been observed?";
    case 7: return "Have at least 6 nodes been observed?";
    case 8: return "Have at least 9 nodes been observed?";
    case 9: return "Are all nodes on the lowest level observed?";
    case 10: return "Are all leaves observed?";
    case 11: return "Is the best expected path positive?";
    case 12: return "Does a best expected path contain a maximal observed value?";
    case 13: return "Is this the first click?";
    case 14: return "Is it in the same branch as the previous click?";
  }
  return "?";
}

std::string lit_phrase(const BaseLit& lit) {
  if (lit.base == 0) return lit.negated ? "unobserved" : "observed";
  std::string p = base_phrase(lit.base);
  return lit.negated ? "not " + p : p;
}

std::string conj_phrase(const std::vector<BaseLit>& conj) {
  std::string s;
  for (size_t i = 0; i < conj.size(); ++i) {
    if (i) s += " and ";
    s += lit_phrase(conj[i]);
  }
  return s;
}

}  // namespace

std::string english(const Predicate& p, const EnvironmentSpec& env) {
  switch (p.kind) {
    case PredKind::Base:
      return std::string("Is it ") + base_phrase(p.base) + "?";
    case PredKind::General:
      return general_question(p.general, env);
    case PredKind::Among: {
      // Phrase an observedness literal as the comparison set when it is
      // conjoined with substantive properties: "Is it X among unobserved
      // nodes?" rather than "Is it unobserved and X?".
      if (p.conj.size() > 1) {
        std::vector<BaseLit> rest;
        const BaseLit* obs = nullptr;
        for (const auto& lit : p.conj)
          (lit.base == 0 ? (void)(obs = &lit) : rest.push_back(lit));
        if (obs && !rest.empty())
          return "Is it " + conj_phrase(rest) + " among " +
                 (obs->negated ? "unobserved" : "observed") + " nodes?";
      }
      return "Is it " + conj_phrase(p.conj) + "?";
    }
    case PredKind::AmongWith:
      return std::string("Is it ") + among_phrase(p.among) + " among " +
             conj_phrase(p.conj) + " nodes?";
    case PredKind::AllWith:
      return "Are all " + conj_phrase(p.conj) + " nodes " + among_phrase(p.among) + "?";
    case PredKind::Not: {
      const Predicate& q = *p.inner;
      if (q.kind == PredKind::Base && q.base == 0) return "Is it unobserved?";
      if (q.kind == PredKind::Base)
        return std::string("Is it not ") + base_phrase(q.base) + "?";
      std::string s = english(q, env);
      if (!s.empty() && s.back() == '?') s.pop_back();
      return "Is it false that: " + s + "?";
    }
  }
  throw std::logic_error("bad predicate kind");
}

}  // namespace mouselab
