#pragma once

#include <limits>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/instance.hpp"
#include "domp/master.hpp"

namespace domp {

/// Original variable x_ij^k as a 0-based (client, facility, position).
using Triplet = CutKey;

inline constexpr double kMasked = std::numeric_limits<double>::infinity();

/// Local fixings of original variables: x = 0 for `zeros`, x = 1 for `ones`.
struct FixingMask {
  std::vector<Triplet> zeros;
  std::vector<Triplet> ones;

  bool empty() const { return zeros.empty() && ones.empty(); }
  /// No triplet in both lists; fixed-to-one triplets use distinct clients
  /// and distinct positions.
  bool consistent() const;
  /// Whether a column may carry a positive value under these fixings.
  bool allows(const Column& col) const;
};

/// Prefix ("first") and suffix ("second") sums of cut duals per position
/// level, indexed by rank 1..n^2. prefix(k, r) sums zeta over cuts at level
/// k with rank <= r, ascending; suffix(k, r) over rank >= r, descending.
class ZetaSums {
 public:
  ZetaSums() = default;
  ZetaSums(const RankMatrix& ranks, const std::vector<CutKey>& cuts, const std::vector<double>& zeta);

  bool empty() const { return empty_; }
  double prefix(int level, int rank) const { return empty_ ? 0.0 : first_[slot(level, rank)]; }
  double suffix(int level, int rank) const { return empty_ ? 0.0 : second_[slot(level, rank)]; }

 private:
  std::size_t slot(int level, int rank) const {
    return static_cast<std::size_t>(level) * (n2_ + 1) + rank;
  }
  bool empty_ = true;
  int n2_ = 0;
  std::vector<double> first_, second_;
};

/// Evaluates d_ij^k for one dual vector. With `farkas` the lambda*c term is
/// dropped.
class DCoefficients {
 public:
  DCoefficients(const Instance& inst, const RankMatrix& ranks, const DualVector& duals,
                bool farkas = false);

  /// Full contribution including cut duals.
  double d(int client, int facility, int position) const;
  /// Contribution without the cut-dual sums.
  double d_plain(int client, int facility, int position) const;
  /// The cut-dual part alone.
  double d_zeta(int client, int facility, int position) const;

  const DualVector& duals() const { return *duals_; }
  bool has_cuts() const { return !zeta_.empty(); }

 private:
  const Instance* inst_;
  const RankMatrix* ranks_;
  const DualVector* duals_;
  bool farkas_;
  ZetaSums zeta_;
};

/// D_j: rows are clients sorted by rank toward facility j.
struct PricingMatrix {
  int facility = 0;
  int n = 0;
  std::vector<int> order;   // order[l] = client in row l
  std::vector<double> d;    // d[l * n + k]

  double at(int l, int k) const { return d[static_cast<std::size_t>(l) * n + k]; }
};

PricingMatrix build_pricing_matrix(const DCoefficients& coef, const RankMatrix& ranks, int facility,
                                   const FixingMask& mask);

/// Sets masked entries of a matrix: x = 0 fixings and the consequences of
/// x = 1 fixings. `value` is +inf by default.
void apply_mask(PricingMatrix& pm, const FixingMask& mask, double value = kMasked);

struct PricingResult {
  int facility = 0;
  double g = 0.0;               // DP value g(i_n, n)
  double reduced_cost = 0.0;    // g + delta + gamma_j
  std::vector<Couple> couples;  // sorted by position
};

/// Dynamic program over D_j with the exclusion-first tie order.
PricingResult exact_pricer(const PricingMatrix& pm, const DualVector& duals);

/// Exact pricing for every facility; `threads` > 1 splits facilities
/// across worker threads.
std::vector<PricingResult> exact_pricing_round(const Instance& inst, const RankMatrix& ranks,
                                               const DualVector& duals, const FixingMask& mask,
                                               bool farkas = false, int threads = 1);

struct PricedColumn {
  Column column;
  double reduced_cost = 0.0;
};

/// Greedy scan per facility (ascending j); emits a column when its
/// accumulated reduced cost is below -threshold.
std::vector<PricedColumn> hurry_pricer(const Instance& inst, const RankMatrix& ranks,
                                       const DualVector& duals, const FixingMask& mask,
                                       double threshold = 1e-6);

}  // namespace domp
