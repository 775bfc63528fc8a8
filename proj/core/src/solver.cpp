#include "mouselab/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mouselab {

static size_t probe_start(uint64_t key, size_t cap) {
  // cap is a power of two
  uint64_t h = key * 0x9e3779b97f4a7c15ull;
  return size_t(h >> 32) & (cap - 1);
}

FlatMap::FlatMap(size_t initial_capacity) {
  size_t cap = 16;
  while (cap < initial_capacity) cap <<= 1;
  keys_.assign(cap, 0);
  vals_.assign(cap, 0.0);
}

double* FlatMap::find(uint64_t key) {
  uint64_t k = key + 1;
  size_t cap = keys_.size();
  for (size_t i = probe_start(key, cap);; i = (i + 1) & (cap - 1)) {
    if (keys_[i] == k) return &vals_[i];
    if (keys_[i] == 0) return nullptr;
  }
}

const double* FlatMap::find(uint64_t key) const {
  return const_cast<FlatMap*>(this)->find(key);
}

void FlatMap::insert(uint64_t key, double value) {
  if (size_ * 2 >= keys_.size()) grow();
  uint64_t k = key + 1;
  size_t cap = keys_.size();
  for (size_t i = probe_start(key, cap);; i = (i + 1) & (cap - 1)) {
    if (keys_[i] == k) { vals_[i] = value; return; }
    if (keys_[i] == 0) {
      keys_[i] = k;
      vals_[i] = value;
      ++size_;
      return;
    }
  }
}

void FlatMap::grow() {
  std::vector<uint64_t> ok = std::move(keys_);
  std::vector<double> ov = std::move(vals_);
  keys_.assign(ok.size() * 2, 0);
  vals_.assign(ov.size() * 2, 0.0);
  size_ = 0;
  for (size_t i = 0; i < ok.size(); ++i)
    if (ok[i]) insert(ok[i] - 1, ov[i]);
}

ValueTable::ValueTable(const EnvironmentSpec& env, size_t capacity_hint)
    : env_(&env),
      memo_(capacity_hint ? capacity_hint
                          : (env.tree.node_count >= 10 ? (size_t(1) << 24) : 16)) {}

double ValueTable::value(Belief b) { return value_canonical(canonicalize(*env_, b)); }

double ValueTable::value_canonical(Belief cb) {
  if (const double* v = memo_.find(cb)) return *v;
  const TreeStructure& t = env_->tree;
  double best = termination_reward(*env_, cb);
  for (int n = 1; n <= t.node_count; ++n) {
    if (env_->observed(cb, n)) continue;
    const auto& s = env_->support_of(n);
    double ev = 0;
    for (size_t i = 0; i < s.size(); ++i)
      ev += value_canonical(canonicalize(*env_, t.with_code(cb, n, int(i) + 1)));
    double q = -env_->click_cost + ev / double(s.size());
    best = std::max(best, q);
  }
  memo_.insert(cb, best);
  return best;
}

std::vector<std::pair<Computation, double>> ValueTable::q_values(Belief b) {
  std::vector<std::pair<Computation, double>> out;
  out.emplace_back(Computation::terminate(), termination_reward(*env_, b));
  const TreeStructure& t = env_->tree;
  for (int n = 1; n <= t.node_count; ++n) {
    if (env_->observed(b, n)) continue;
    const auto& s = env_->support_of(n);
    double ev = 0;
    for (size_t i = 0; i < s.size(); ++i)
      ev += value(t.with_code(b, n, int(i) + 1));
    out.emplace_back(Computation::click(n), -env_->click_cost + ev / double(s.size()));
  }
  return out;
}

std::vector<Computation> ValueTable::optimal_action_set(Belief b, double tie_eps) {
  auto qs = q_values(b);
  double best = -1e18;
  for (const auto& [c, q] : qs) best = std::max(best, q);
  std::vector<Computation> out;
  for (const auto& [c, q] : qs)
    if (q >= best - tie_eps) out.push_back(c);
  return out;
}

namespace {
constexpr uint64_t kCacheMagic = 0x4d4c564143484531ull;  // "MLVACHE1"
}

bool ValueTable::save_cache(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return false;
  std::string fp = env_->fingerprint();
  uint64_t magic = kCacheMagic, fplen = fp.size(), count = memo_.size();
  bool ok = std::fwrite(&magic, 8, 1, f) == 1 && std::fwrite(&fplen, 8, 1, f) == 1 &&
            std::fwrite(fp.data(), 1, fp.size(), f) == fp.size() &&
            std::fwrite(&count, 8, 1, f) == 1;
  memo_.for_each([&](uint64_t key, double value) {
    ok = ok && std::fwrite(&key, 8, 1, f) == 1 && std::fwrite(&value, 8, 1, f) == 1;
  });
  std::fclose(f);
  return ok;
}

bool ValueTable::load_cache(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return false;
  uint64_t magic = 0, fplen = 0, count = 0;
  std::string fp = env_->fingerprint();
  bool ok = std::fread(&magic, 8, 1, f) == 1 && magic == kCacheMagic &&
            std::fread(&fplen, 8, 1, f) == 1 && fplen == fp.size();
  if (ok) {
    std::string got(fplen, '\0');
    ok = std::fread(got.data(), 1, fplen, f) == fplen && got == fp &&
         std::fread(&count, 8, 1, f) == 1;
  }
  if (ok) {
    for (uint64_t i = 0; i < count && ok; ++i) {
      uint64_t key;
      double value;
      ok = std::fread(&key, 8, 1, f) == 1 && std::fread(&value, 8, 1, f) == 1;
      if (ok) memo_.insert(key, value);
    }
  }
  std::fclose(f);
  return ok;
}

ValueTable solve(const EnvironmentSpec& env) {
  ValueTable table(env);
  table.value(Belief(0));
  return table;
}

}  // namespace mouselab
