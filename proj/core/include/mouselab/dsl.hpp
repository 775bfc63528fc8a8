#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mouselab/demos.hpp"
#include "mouselab/env.hpp"

namespace mouselab {

enum class PredKind { Base, General, Among, AmongWith, AllWith, Not };

// A signed base predicate inside an AMONG/ALL conjunction.
struct BaseLit {
  int base = 0;  // index into the base vocabulary
  bool negated = false;
  auto operator<=>(const BaseLit&) const = default;
};

struct Predicate {
  PredKind kind = PredKind::Base;
  int base = -1;               // Base
  int general = -1;            // General
  std::vector<BaseLit> conj;   // Among / AmongWith / AllWith
  int among = -1;              // AmongWith / AllWith
  std::shared_ptr<Predicate> inner;  // Not

  static Predicate make_base(int b);
  static Predicate make_general(int g);
  static Predicate make_among(std::vector<BaseLit> conj);
  static Predicate make_among_with(std::vector<BaseLit> conj, int among);
  static Predicate make_all_with(std::vector<BaseLit> conj, int among);
  static Predicate make_not(Predicate p);
};

// Fixed vocabularies; names are the canonical text form.
const std::vector<std::string>& base_pred_names();    // 14
const std::vector<std::string>& general_pred_names(); // 15
const std::vector<std::string>& among_pred_names();   // 12

struct GrammarConfig {
  std::vector<std::string> base = base_pred_names();
  std::vector<std::string> general = general_pred_names();
  std::vector<std::string> among = among_pred_names();
  int among_width = 2;       // max conjunction width inside AMONG
  int among_with_width = 1;  // max conjunction width inside AMONG-with / ALL-with

  std::string to_text() const;
  static GrammarConfig from_text(const std::string& text);
  uint64_t fingerprint() const;  // stable digest of to_text()
};

struct PredicateSet {
  std::vector<Predicate> predicates;
  uint64_t grammar_fingerprint = 0;

  size_t size() const { return predicates.size(); }
  const Predicate& operator[](size_t i) const { return predicates[i]; }
};

PredicateSet enumerate_predicates(const GrammarConfig& config);

// Per-(belief, prev_click) evaluation context; build once, evaluate many
// predicates or many candidate clicks against it.
struct EvalContext {
  const EnvironmentSpec* env = nullptr;
  Belief belief = 0;
  int prev_click = -1;

  uint32_t observed_mask = 0;   // bit n-1
  int values[16] = {};          // revealed value per node, 0 if unobserved
  double best_sum = 0;          // best expected path value
  uint32_t on_best_mask = 0;    // nodes lying on some best expected path
  uint32_t level_max_mask = 0;  // observed nodes equal to their level max
  double best_through[16] = {}; // best expected path value among paths via node
  uint32_t succ_max_mask = 0;   // some proper ancestor is an observed level max
  uint32_t best_via_max_mask = 0;  // on a best path, and every best path through
                                   // the node contains an observed level max
  int observed_cnt = 0;
  int max_level = 0;

  EvalContext(const EnvironmentSpec& e, Belief b, int prev);
};

bool evaluate(const Predicate& p, const EvalContext& ctx, Computation click);
bool evaluate(const Predicate& p, const EnvironmentSpec& env, Belief b,
              int prev_click, Computation click);

struct BinaryMatrix {
  size_t rows = 0, cols = 0;
  size_t words_per_col = 0;
  std::vector<uint64_t> bits;  // column-major

  BinaryMatrix() = default;
  BinaryMatrix(size_t r, size_t c)
      : rows(r), cols(c), words_per_col((r + 63) / 64), bits(words_per_col * c, 0) {}
  bool get(size_t r, size_t c) const {
    return bits[c * words_per_col + r / 64] >> (r % 64) & 1;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t& w = bits[c * words_per_col + r / 64];
    if (v) w |= uint64_t(1) << (r % 64); else w &= ~(uint64_t(1) << (r % 64));
  }
  const uint64_t* col(size_t c) const { return &bits[c * words_per_col]; }
};

struct FeaturizedRow {
  Belief belief;
  Computation action;
  int prev_click;
};

// Memoizes feature rows by (belief, action, prev_click). Train/validation
// resplits featurize the same pairs repeatedly; the cache evaluates each
// distinct pair against the predicate set exactly once.
class FeatureCache {
 public:
  FeatureCache(const PredicateSet& preds, const EnvironmentSpec& env)
      : preds_(&preds), env_(&env), words_((preds.size() + 63) / 64) {}

  size_t words_per_row() const { return words_; }
  // Bit c of the returned block is predicate c's value. The pointer is valid
  // until the next row() call.
  const uint64_t* row(const FeaturizedRow& r);

 private:
  struct Key {
    Belief belief;
    int16_t action;
    int16_t prev;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };

  const PredicateSet* preds_;
  const EnvironmentSpec* env_;
  size_t words_;
  std::unordered_map<Key, size_t, KeyHash> index_;  // key -> offset in rows_
  std::vector<uint64_t> rows_;                      // row-major, words_ each
};

BinaryMatrix featurize(const std::vector<FeaturizedRow>& pairs,
                       const PredicateSet& preds, const EnvironmentSpec& env,
                       FeatureCache* cache = nullptr);

std::string english(const Predicate& p, const EnvironmentSpec& env);

std::string predicate_to_text(const Predicate& p);
Predicate predicate_from_text(const std::string& text);

// Index of a predicate in the set by its text form; -1 if absent.
int find_predicate(const PredicateSet& set, const std::string& text);

}  // namespace mouselab
