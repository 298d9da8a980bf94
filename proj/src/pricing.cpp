#include "domp/pricing.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <tuple>

namespace domp {

bool FixingMask::consistent() const {
  for (const auto& z : zeros)
    if (std::find(ones.begin(), ones.end(), z) != ones.end()) return false;
  for (std::size_t a = 0; a < ones.size(); ++a)
    for (std::size_t b = a + 1; b < ones.size(); ++b)
      if (ones[a].client == ones[b].client || ones[a].position == ones[b].position) return false;
  return true;
}

bool FixingMask::allows(const Column& col) const {
  for (const auto& cp : col.couples) {
    for (const auto& z : zeros)
      if (z.facility == col.facility && z.client == cp.client && z.position == cp.position)
        return false;
    for (const auto& o : ones) {
      const bool same_client = o.client == cp.client;
      const bool same_position = o.position == cp.position;
      if (!same_client && !same_position) continue;
      if (o.facility != col.facility) return false;
      if (!(same_client && same_position)) return false;
    }
  }
  return true;
}

ZetaSums::ZetaSums(const RankMatrix& ranks, const std::vector<CutKey>& cuts,
                   const std::vector<double>& zeta) {
  if (cuts.empty()) return;
  const int n = ranks.n();
  n2_ = n * n;
  empty_ = false;
  first_.assign(static_cast<std::size_t>(n) * (n2_ + 1), 0.0);
  second_.assign(first_.size(), 0.0);
  std::vector<char> is_cut(first_.size(), 0);

  // Cut list sorted by level, then rank.
  std::vector<std::tuple<int, int, double>> list;
  list.reserve(cuts.size());
  for (std::size_t c = 0; c < cuts.size(); ++c)
    list.emplace_back(cuts[c].position, ranks.rank(cuts[c].client, cuts[c].facility), zeta[c]);
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  int k_prev = -1;
  double previous = 0.0;
  for (const auto& [k, r, z] : list) {
    if (k != k_prev) {
      previous = 0.0;
      k_prev = k;
    }
    first_[slot(k, r)] = previous + z;
    previous = first_[slot(k, r)];
    is_cut[slot(k, r)] = 1;
  }
  k_prev = -1;
  for (auto it = list.rbegin(); it != list.rend(); ++it) {
    const auto& [k, r, z] = *it;
    if (k != k_prev) {
      previous = 0.0;
      k_prev = k;
    }
    second_[slot(k, r)] = previous + z;
    previous = second_[slot(k, r)];
  }

  // Spread to the ranks without a cut.
  for (int k = 0; k < n; ++k) {
    double current = 0.0, current_r = 0.0;
    for (int index = 1; index <= n2_; ++index) {
      if (is_cut[slot(k, index)]) current = first_[slot(k, index)];
      else first_[slot(k, index)] = current;
      const int index_r = 1 + n2_ - index;
      if (is_cut[slot(k, index_r)]) current_r = second_[slot(k, index_r)];
      else second_[slot(k, index_r)] = current_r;
    }
  }
}

DCoefficients::DCoefficients(const Instance& inst, const RankMatrix& ranks, const DualVector& duals,
                             bool farkas)
    : inst_(&inst), ranks_(&ranks), duals_(&duals), farkas_(farkas),
      zeta_(ranks, duals.cuts, duals.zeta) {}

double DCoefficients::d_plain(int i, int j, int k) const {
  const int n = inst_->n();
  const double n2 = static_cast<double>(n) * n;
  const int r = ranks_->rank(i, j);
  double v = farkas_ ? 0.0 : static_cast<double>(inst_->weight(k) * inst_->cost(i, j));
  if (k >= 1) v += (n2 - r + 1) * duals_->epsilon[k];
  if (k + 1 < n) v += r * duals_->epsilon[k + 1];
  v -= duals_->alpha[i];
  v -= duals_->beta[k];
  return v;
}

double DCoefficients::d_zeta(int i, int j, int k) const {
  if (zeta_.empty()) return 0.0;
  const int n = inst_->n();
  const int r = ranks_->rank(i, j);
  double v = 0.0;
  if (k >= 1) v += zeta_.suffix(k, r);
  if (k + 1 < n) v += zeta_.prefix(k + 1, r);
  return v;
}

double DCoefficients::d(int i, int j, int k) const {
  return zeta_.empty() ? d_plain(i, j, k) : d_plain(i, j, k) + d_zeta(i, j, k);
}

void apply_mask(PricingMatrix& pm, const FixingMask& mask, double value) {
  const int n = pm.n;
  std::vector<int> row_of(n);
  for (int l = 0; l < n; ++l) row_of[pm.order[l]] = l;
  auto set = [&](int client, int k) { pm.d[static_cast<std::size_t>(row_of[client]) * n + k] = value; };
  for (const auto& z : mask.zeros)
    if (z.facility == pm.facility) set(z.client, z.position);
  for (const auto& o : mask.ones) {
    if (o.facility != pm.facility) {
      for (int k = 0; k < n; ++k) set(o.client, k);
      for (int i = 0; i < n; ++i) set(i, o.position);
    } else {
      for (int i = 0; i < n; ++i)
        if (i != o.client) set(i, o.position);
      for (int k = 0; k < n; ++k)
        if (k != o.position) set(o.client, k);
    }
  }
}

PricingMatrix build_pricing_matrix(const DCoefficients& coef, const RankMatrix& ranks, int facility,
                                   const FixingMask& mask) {
  PricingMatrix pm;
  pm.facility = facility;
  pm.n = ranks.n();
  const int n = pm.n;
  pm.order.resize(n);
  std::iota(pm.order.begin(), pm.order.end(), 0);
  std::sort(pm.order.begin(), pm.order.end(),
            [&](int a, int b) { return ranks.rank(a, facility) < ranks.rank(b, facility); });
  pm.d.resize(static_cast<std::size_t>(n) * n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) pm.d[static_cast<std::size_t>(l) * n + k] = coef.d(pm.order[l], facility, k);
  if (!mask.empty()) apply_mask(pm, mask);
  return pm;
}

PricingResult exact_pricer(const PricingMatrix& pm, const DualVector& duals) {
  enum Move : unsigned char { kDiag, kLeft, kUp, kTake, kTakeAlone, kEmpty };
  const int n = pm.n;
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  std::vector<Move> move(g.size());
  auto at = [n](int l, int k) { return static_cast<std::size_t>(l) * n + k; };

  // Step 0
  {
    const double d = pm.at(0, 0);
    g[at(0, 0)] = std::min(0.0, d);
    move[at(0, 0)] = d < 0 ? kTakeAlone : kEmpty;
  }
  // Step 1: first row
  for (int k = 1; k < n; ++k) {
    const double prev = g[at(0, k - 1)];
    const double v = std::min(pm.at(0, k), prev);
    g[at(0, k)] = v;
    move[at(0, k)] = v == prev ? kLeft : kTakeAlone;
  }
  // Step 2: first column
  for (int l = 1; l < n; ++l) {
    const double prev = g[at(l - 1, 0)];
    const double v = std::min(pm.at(l, 0), prev);
    g[at(l, 0)] = v;
    move[at(l, 0)] = v == prev ? kUp : kTakeAlone;
  }
  // Step 3: interior, exclusion candidates checked before inclusion
  for (int l = 1; l < n; ++l) {
    for (int k = 1; k < n; ++k) {
      const double diag = g[at(l - 1, k - 1)];
      const double left = g[at(l, k - 1)];
      const double up = g[at(l - 1, k)];
      const double take = diag + pm.at(l, k);
      const double v = std::min({take, diag, left, up});
      g[at(l, k)] = v;
      if (v == diag) move[at(l, k)] = kDiag;
      else if (v == left) move[at(l, k)] = kLeft;
      else if (v == up) move[at(l, k)] = kUp;
      else move[at(l, k)] = kTake;
    }
  }

  PricingResult res;
  res.facility = pm.facility;
  res.g = g[at(n - 1, n - 1)];
  res.reduced_cost = res.g + duals.delta + duals.gamma[pm.facility];
  int l = n - 1, k = n - 1;
  for (;;) {
    const Move mv = move[at(l, k)];
    if (mv == kEmpty) break;
    if (mv == kTakeAlone) {
      res.couples.push_back({pm.order[l], k});
      break;
    }
    if (mv == kTake) {
      res.couples.push_back({pm.order[l], k});
      --l;
      --k;
    } else if (mv == kDiag) {
      --l;
      --k;
    } else if (mv == kLeft) {
      --k;
    } else {
      --l;
    }
  }
  std::reverse(res.couples.begin(), res.couples.end());
  return res;
}

std::vector<PricingResult> exact_pricing_round(const Instance& inst, const RankMatrix& ranks,
                                               const DualVector& duals, const FixingMask& mask,
                                               bool farkas, int threads) {
  const int n = inst.n();
  const DCoefficients coef(inst, ranks, duals, farkas);
  std::vector<PricingResult> results(n);
  auto work = [&](int begin, int step) {
    for (int j = begin; j < n; j += step)
      results[j] = exact_pricer(build_pricing_matrix(coef, ranks, j, mask), duals);
  };
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return results;
}

std::vector<PricedColumn> hurry_pricer(const Instance& inst, const RankMatrix& ranks,
                                       const DualVector& duals, const FixingMask& mask,
                                       double threshold) {
  const int n = inst.n();
  const DCoefficients coef(inst, ranks, duals);
  std::vector<PricedColumn> out;
  std::vector<int> order(n);
  PricingMatrix masked;
  for (int j = 0; j < n; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ranks.rank(a, j) < ranks.rank(b, j); });
    // Masked cells are found through a 0/inf overlay on an empty matrix.
    bool use_mask = !mask.empty();
    if (use_mask) {
      masked.facility = j;
      masked.n = n;
      masked.order = order;
      masked.d.assign(static_cast<std::size_t>(n) * n, 0.0);
      apply_mask(masked, mask);
    }
    double reduced = 0.0;
    std::vector<Couple> couples;
    int last = -1;  // last used position (0-based)
    for (int l = 0; l < n && last != n - 1; ++l) {
      const int i = order[l];
      for (int k = last + 1; k < n; ++k) {
        if (use_mask && masked.at(l, k) == kMasked) continue;
        double d = coef.d_plain(i, j, k);
        if (!(d < 0)) continue;
        if (coef.has_cuts()) {
          d += coef.d_zeta(i, j, k);
          if (!(d < 0)) continue;
        }
        reduced += d;
        couples.push_back({i, k});
        last = k;
        break;
      }
    }
    const double rc = reduced + duals.delta + duals.gamma[j];
    if (!couples.empty() && rc < -threshold)
      out.push_back({make_column(inst, j, std::move(couples)), rc});
  }
  return out;
}

}  // namespace domp
