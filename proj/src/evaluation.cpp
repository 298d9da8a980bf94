#include "domp/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace domp {

FacilitySet::FacilitySet(std::initializer_list<int> items)
    : FacilitySet(std::vector<int>(items)) {}

FacilitySet::FacilitySet(std::vector<int> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  if (std::adjacent_find(items_.begin(), items_.end()) != items_.end())
    throw std::invalid_argument("facility set has duplicate entries");
}

bool FacilitySet::contains(int j) const {
  return std::binary_search(items_.begin(), items_.end(), j);
}

void FacilitySet::insert(int j) {
  auto it = std::lower_bound(items_.begin(), items_.end(), j);
  if (it == items_.end() || *it != j) items_.insert(it, j);
}

void FacilitySet::erase(int j) {
  auto it = std::lower_bound(items_.begin(), items_.end(), j);
  if (it != items_.end() && *it == j) items_.erase(it);
}

std::size_t ColumnKeyHash::operator()(const Column& c) const {
  std::size_t h = std::hash<int>()(c.facility) * 0x9e3779b97f4a7c15ULL;
  for (const auto& cp : c.couples) {
    h ^= std::hash<int>()(cp.client * 65599 + cp.position) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

Cost column_cost(const Instance& inst, int facility, const std::vector<Couple>& couples) {
  Cost total = 0;
  for (const auto& cp : couples) total += inst.weight(cp.position) * inst.cost(cp.client, facility);
  return total;
}

Column make_column(const Instance& inst, int facility, std::vector<Couple> couples) {
  std::sort(couples.begin(), couples.end(),
            [](const Couple& a, const Couple& b) { return a.position < b.position; });
  Column col{facility, std::move(couples), 0};
  col.cost = column_cost(inst, facility, col.couples);
  return col;
}

bool is_valid_column(const Instance& inst, const RankMatrix& ranks, const Column& col,
                     std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  const int n = inst.n();
  if (col.facility < 0 || col.facility >= n) return fail("facility out of range");
  std::vector<char> seen_client(n, 0);
  for (std::size_t t = 0; t < col.couples.size(); ++t) {
    const auto& cp = col.couples[t];
    if (cp.client < 0 || cp.client >= n || cp.position < 0 || cp.position >= n)
      return fail("couple out of range");
    if (seen_client[cp.client]) return fail("client repeated");
    seen_client[cp.client] = 1;
    if (t > 0) {
      const auto& prev = col.couples[t - 1];
      if (prev.position >= cp.position) return fail("positions not strictly increasing");
      if (ranks.rank(prev.client, col.facility) >= ranks.rank(cp.client, col.facility))
        return fail("ranks not increasing with position");
    }
  }
  if (col.cost != column_cost(inst, col.facility, col.couples)) return fail("cost mismatch");
  return true;
}

Allocation allocation_costs(const Instance& inst, const RankMatrix& ranks, const FacilitySet& open) {
  if (open.empty()) throw std::invalid_argument("allocation_costs: empty facility set");
  const int n = inst.n();
  Allocation a;
  a.costs.resize(n);
  a.servers.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int j : open) {
      if (best < 0 || inst.cost(i, j) < inst.cost(i, best) ||
          (inst.cost(i, j) == inst.cost(i, best) && ranks.rank(i, j) < ranks.rank(i, best)))
        best = j;
    }
    a.servers[i] = best;
    a.costs[i] = inst.cost(i, best);
  }
  return a;
}

Cost ordered_value_of_costs(const Instance& inst, std::vector<Cost> costs) {
  std::sort(costs.begin(), costs.end());
  Cost total = 0;
  for (std::size_t k = 0; k < costs.size(); ++k) total += inst.weight(static_cast<int>(k)) * costs[k];
  return total;
}

Cost ordered_value_any(const Instance& inst, const FacilitySet& open) {
  if (open.empty()) throw std::invalid_argument("ordered_value: empty facility set");
  const int n = inst.n();
  std::vector<Cost> costs(n);
  for (int i = 0; i < n; ++i) {
    Cost best = inst.cost(i, open.items().front());
    for (int j : open) best = std::min(best, inst.cost(i, j));
    costs[i] = best;
  }
  return ordered_value_of_costs(inst, std::move(costs));
}

Cost ordered_value(const Instance& inst, const FacilitySet& open) {
  if (static_cast<int>(open.size()) != inst.p())
    throw std::invalid_argument("ordered_value: |J| must equal p");
  return ordered_value_any(inst, open);
}

std::vector<Column> solution_to_columns(const Instance& inst, const RankMatrix& ranks,
                                        const FacilitySet& open) {
  if (static_cast<int>(open.size()) != inst.p())
    throw std::invalid_argument("solution_to_columns: |J| must equal p");
  const int n = inst.n();
  const Allocation a = allocation_costs(inst, ranks, open);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return ranks.rank(x, a.servers[x]) < ranks.rank(y, a.servers[y]);
  });
  std::vector<Column> columns;
  for (int j : open) {
    std::vector<Couple> couples;
    for (int k = 0; k < n; ++k)
      if (a.servers[order[k]] == j) couples.push_back({order[k], k});
    if (!couples.empty()) columns.push_back(make_column(inst, j, std::move(couples)));
  }
  return columns;
}

std::string to_string(const FacilitySet& set) {
  std::string s = "{";
  for (std::size_t t = 0; t < set.size(); ++t) {
    if (t) s += ",";
    s += std::to_string(set.items()[t] + 1);
  }
  return s + "}";
}

std::string to_string(const Column& col) {
  std::string s = "j=" + std::to_string(col.facility + 1) + " {";
  for (std::size_t t = 0; t < col.couples.size(); ++t) {
    if (t) s += ",";
    s += "(" + std::to_string(col.couples[t].client + 1) + "," +
         std::to_string(col.couples[t].position + 1) + ")";
  }
  return s + "}";
}

}  // namespace domp
