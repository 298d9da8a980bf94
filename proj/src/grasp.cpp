#include "domp/grasp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace domp {

FacilitySet construct_randomized_partial(const Instance& inst, int q, Rng& rng) {
  const int n = inst.n();
  if (q < 0 || q > inst.p()) throw std::invalid_argument("partial size must satisfy 0 <= q <= p");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int t = 0; t < q; ++t) {
    const auto pick = static_cast<int>(rng.uniform_int(t, n - 1));
    std::swap(pool[t], pool[pick]);
  }
  return FacilitySet(std::vector<int>(pool.begin(), pool.begin() + q));
}

FacilitySet construct_greedy(const Instance& inst, FacilitySet partial) {
  const int n = inst.n();
  if (static_cast<int>(partial.size()) > inst.p())
    throw std::invalid_argument("partial solution larger than p");
  std::vector<Cost> current(n, std::numeric_limits<Cost>::max());
  for (int j : partial)
    for (int i = 0; i < n; ++i) current[i] = std::min(current[i], inst.cost(i, j));
  std::vector<Cost> trial(n);
  while (static_cast<int>(partial.size()) < inst.p()) {
    int best_j = -1;
    Cost best_value = std::numeric_limits<Cost>::max();
    for (int j = 0; j < n; ++j) {
      if (partial.contains(j)) continue;
      for (int i = 0; i < n; ++i) trial[i] = std::min(current[i], inst.cost(i, j));
      const Cost v = ordered_value_of_costs(inst, trial);
      if (v < best_value) {
        best_value = v;
        best_j = j;
      }
    }
    partial.insert(best_j);
    for (int i = 0; i < n; ++i) current[i] = std::min(current[i], inst.cost(i, best_j));
  }
  return partial;
}

namespace {

// Per-client best and second-best open facility for O(n) swap evaluation.
class SwapEvaluator {
 public:
  SwapEvaluator(const Instance& inst, std::vector<int> open) : inst_(inst), open_(std::move(open)) {
    rebuild();
  }

  const std::vector<int>& open() const { return open_; }
  Cost value() const { return value_; }

  Cost evaluate_swap(int out, int in) {
    const int n = inst_.n();
    for (int i = 0; i < n; ++i) {
      const Cost keep = best_[i] == out ? second_cost_[i] : best_cost_[i];
      scratch_[i] = std::min(keep, inst_.cost(i, in));
    }
    return ordered_value_of_costs(inst_, scratch_);
  }

  void apply_swap(int slot, int in) {
    open_[slot] = in;
    rebuild();
  }

 private:
  void rebuild() {
    const int n = inst_.n();
    best_.assign(n, -1);
    best_cost_.assign(n, std::numeric_limits<Cost>::max());
    second_cost_.assign(n, std::numeric_limits<Cost>::max());
    scratch_.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j : open_) {
        const Cost c = inst_.cost(i, j);
        if (c < best_cost_[i]) {
          second_cost_[i] = best_cost_[i];
          best_cost_[i] = c;
          best_[i] = j;
        } else if (c < second_cost_[i]) {
          second_cost_[i] = c;
        }
      }
    }
    value_ = ordered_value_of_costs(inst_, best_cost_);
  }

  const Instance& inst_;
  std::vector<int> open_;
  std::vector<int> best_;
  std::vector<Cost> best_cost_, second_cost_, scratch_;
  Cost value_ = 0;
};

class ColumnPool {
 public:
  void add_solution(const Instance& inst, const RankMatrix& ranks, const FacilitySet& set) {
    for (auto& col : solution_to_columns(inst, ranks, set))
      if (seen_.insert(col).second) columns_.push_back(std::move(col));
  }
  std::vector<Column> take() { return std::move(columns_); }

 private:
  std::unordered_set<Column, ColumnKeyHash, ColumnKeyEqual> seen_;
  std::vector<Column> columns_;
};

}  // namespace

LocalSearchResult local_search(const Instance& inst, const RankMatrix& ranks, const FacilitySet& start,
                               int passes, bool harvest) {
  const int n = inst.n();
  if (static_cast<int>(start.size()) != inst.p())
    throw std::invalid_argument("local_search: |J| must equal p");
  SwapEvaluator eval(inst, start.items());
  ColumnPool pool;
  if (harvest) pool.add_solution(inst, ranks, start);
  std::vector<char> is_open(n, 0);
  for (int j : start) is_open[j] = 1;
  Cost z = eval.value();

  for (int pass = 0; pass < passes; ++pass) {
    bool improved = false;
    for (int slot = 0; slot < inst.p(); ++slot) {
      for (int j2 = 0; j2 < n; ++j2) {
        if (is_open[j2]) continue;
        const int j1 = eval.open()[slot];
        const Cost v = eval.evaluate_swap(j1, j2);
        if (v < z) {
          z = v;
          is_open[j1] = 0;
          is_open[j2] = 1;
          eval.apply_swap(slot, j2);
          improved = true;
          if (harvest) pool.add_solution(inst, ranks, FacilitySet(eval.open()));
        }
      }
    }
    if (!improved) break;
  }
  LocalSearchResult out;
  out.set = FacilitySet(eval.open());
  out.value = z;
  out.columns = pool.take();
  return out;
}

GraspResult run_grasp(const Instance& inst, const GraspConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("GRASP needs at least one replication");
  if (cfg.local_search_passes < 0) throw std::invalid_argument("local search passes must be >= 0");
  const int q = cfg.partial_size < 0 ? inst.p() / 2 : cfg.partial_size;
  if (q > inst.p()) throw std::invalid_argument("partial size q must not exceed p");
  const RankMatrix ranks(inst);
  GraspResult result;
  std::unordered_set<Column, ColumnKeyHash, ColumnKeyEqual> seen;
  bool have = false;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(rep));
    const FacilitySet partial = construct_randomized_partial(inst, q, rng);
    const FacilitySet greedy = construct_greedy(inst, partial);
    LocalSearchResult ls = local_search(inst, ranks, greedy, cfg.local_search_passes, true);
    for (auto& col : ls.columns)
      if (seen.insert(col).second) result.harvested.push_back(std::move(col));
    if (!have || ls.value < result.best_value) {
      result.best_value = ls.value;
      result.best_set = ls.set;
      have = true;
    }
    result.best_history.push_back(result.best_value);
  }
  return result;
}

}  // namespace domp
