#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/instance.hpp"
#include "domp/master.hpp"

namespace testing {

using namespace domp;

// Ordered value straight from the definition: cheapest open facility per
// client, sort the costs, dot with the weights.
inline Cost naive_value(const Instance& inst, const std::vector<int>& open) {
  std::vector<Cost> c(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    c[i] = inst.cost(i, open[0]);
    for (int j : open) c[i] = std::min(c[i], inst.cost(i, j));
  }
  std::sort(c.begin(), c.end());
  Cost v = 0;
  for (int k = 0; k < inst.n(); ++k) v += inst.weight(k) * c[k];
  return v;
}

// Every p-subset, lexicographic.
inline void for_each_subset(int n, int p, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> s(p);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    f(s);
    int i = p - 1;
    while (i >= 0 && s[i] == n - p + i) --i;
    if (i < 0) return;
    ++s[i];
    for (int t = i + 1; t < p; ++t) s[t] = s[t - 1] + 1;
  }
}

inline Cost brute_optimum(const Instance& inst) {
  Cost best = -1;
  for_each_subset(inst.n(), inst.p(), [&](const std::vector<int>& s) {
    const Cost v = naive_value(inst, s);
    if (best < 0 || v < best) best = v;
  });
  return best;
}

// Reduced cost of (j, S) from the row definitions, nonnegative dual
// convention.
inline double reference_reduced_cost(const Instance& inst, const RankMatrix& R, int j,
                                     const std::vector<Couple>& S, const DualVector& pi,
                                     bool farkas = false) {
  const int n = inst.n();
  double rc = 0.0;
  if (!farkas)
    for (const auto& c : S) rc += static_cast<double>(inst.weight(c.position) * inst.cost(c.client, j));
  for (const auto& c : S) rc -= pi.alpha[c.client] + pi.beta[c.position];
  rc += pi.gamma[j] + pi.delta;
  for (int k = 1; k < n; ++k) {
    double coef = 0.0;
    for (const auto& c : S) {
      if (c.position == k) coef += n * n - R.rank(c.client, j) + 1;
      if (c.position == k - 1) coef += R.rank(c.client, j);
    }
    rc += pi.epsilon[k] * coef;
  }
  for (std::size_t t = 0; t < pi.cuts.size(); ++t) {
    const CutKey& key = pi.cuts[t];
    const int ref = R.rank(key.client, key.facility);
    bool low = false, high = false;
    for (const auto& c : S) {
      if (c.position == key.position && R.rank(c.client, j) <= ref) low = true;
      if (c.position == key.position - 1 && R.rank(c.client, j) >= ref) high = true;
    }
    rc += pi.zeta[t] * (static_cast<int>(low) + static_cast<int>(high));
  }
  return rc;
}

// Feasible couple sets of facility j (empty set included).
inline void enumerate_sets(const RankMatrix& R, int n, int j,
                           const std::function<void(const std::vector<Couple>&)>& visit) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return R.rank(a, j) < R.rank(b, j); });
  std::vector<Couple> cur;
  std::function<void(int, int)> rec = [&](int l, int k) {
    visit(cur);
    for (int l2 = l; l2 < n; ++l2)
      for (int k2 = k; k2 < n; ++k2) {
        cur.push_back({order[l2], k2});
        rec(l2 + 1, k2 + 1);
        cur.pop_back();
      }
  };
  rec(0, 0);
}

inline std::vector<Couple> couples(std::initializer_list<std::pair<int, int>> one_based) {
  std::vector<Couple> out;
  for (auto [i, k] : one_based) out.push_back({i - 1, k - 1});
  return out;
}

}  // namespace testing
