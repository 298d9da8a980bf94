#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/instance.hpp"
#include "domp/lp.hpp"

namespace domp {

/// Strong order cut (i, j, k): 0-based client, facility and position,
/// position >= 1.
struct CutKey {
  int client = 0;
  int facility = 0;
  int position = 0;

  friend bool operator==(const CutKey&, const CutKey&) = default;
  friend auto operator<=>(const CutKey&, const CutKey&) = default;
};

/// Master duals in the all-nonnegative convention of the dual problem:
/// alpha (clients), beta (positions), gamma (facilities), delta
/// (cardinality), epsilon (order rows; epsilon[0] unused), zeta (one per
/// cut, parallel to `cuts`).
struct DualVector {
  std::vector<double> alpha, beta, gamma;
  double delta = 0.0;
  std::vector<double> epsilon;
  std::vector<CutKey> cuts;
  std::vector<double> zeta;

  static DualVector zero(int n);
  int n() const { return static_cast<int>(alpha.size()); }
  double zeta_of(const CutKey& key) const;

  /// sum alpha + sum beta - sum gamma - p delta - n^2 sum epsilon - sum zeta
  double objective(int p) const;

  /// w * a + (1 - w) * b, componentwise; cuts missing from one side count
  /// as zero. The result uses the cut list of `a`.
  static DualVector combine(const DualVector& a, const DualVector& b, double w);
};

/// Basis plus the cut behind each cut row, so it can be reloaded after
/// cuts were added or removed.
struct WarmStart {
  lp::Basis basis;
  std::vector<CutKey> cuts;
  bool empty() const { return basis.empty(); }
};

enum class RowConvention {
  kCovering,      // client and position rows >= 1
  kPartitioning,  // client and position rows = 1
};

/// Restricted master LP. Row layout: n client rows, n position rows,
/// n facility rows, the cardinality row, n-1 order rows (positions 2..n),
/// then one row per cut in insertion order.
class RestrictedMaster {
 public:
  RestrictedMaster(const Instance& inst, RowConvention convention = RowConvention::kPartitioning);

  const Instance& instance() const { return *inst_; }
  const RankMatrix& ranks() const { return ranks_; }
  RowConvention convention() const { return convention_; }

  int client_row(int i) const { return i; }
  int position_row(int k) const { return n_ + k; }
  int facility_row(int j) const { return 2 * n_ + j; }
  int cardinality_row() const { return 3 * n_; }
  /// Order row for position k (0-based, k >= 1).
  int order_row(int k) const { return 3 * n_ + k; }
  int cut_row(int cut) const { return 4 * n_ + cut; }
  int base_rows() const { return 4 * n_; }

  /// Adds a column unless an identical (facility, couples) column exists.
  /// Returns (index, inserted); re-adding a retired column reinstates it
  /// and counts as inserted.
  std::pair<int, bool> add_column(const Column& col);
  std::optional<int> find_column(const Column& col) const;
  int num_columns() const { return static_cast<int>(columns_.size()); }
  const Column& column(int idx) const { return columns_[idx]; }
  const std::vector<Column>& columns() const { return columns_; }

  /// Row coefficients of a column against the current rows (cuts included).
  std::vector<lp::Entry> coefficients(const Column& col) const;

  /// Coefficient of a column in the cut row `key`: 0, 1 or 2.
  int cut_coefficient(const Column& col, const CutKey& key) const;

  int add_cut(const CutKey& key);
  bool has_cut(const CutKey& key) const;
  int num_cuts() const { return static_cast<int>(cuts_.size()); }
  /// Drops cuts whose logical is basic with activity below 1 - tol in the
  /// last solve. Returns the number removed.
  int purge_slack_cuts(double tol = 1e-6);
  const std::vector<CutKey>& cuts() const { return cuts_; }

  void set_column_enabled(int idx, bool enabled);
  bool column_enabled(int idx) const;
  /// Fixes to zero every column that was zero and nonbasic in the last
  /// `min_idle` optimal solves. Retired columns keep their index.
  int retire_idle_columns(int min_idle);
  bool column_retired(int idx) const { return retired_.at(idx); }

  /// Solves the LP, warm-starting from the previous basis.
  const lp::Outcome& solve();
  const lp::Outcome& last() const { return last_; }
  void reset_basis() { basis_ = {}; }
  const lp::Basis& basis() const { return basis_; }
  void set_basis(lp::Basis basis) { basis_ = std::move(basis); }
  WarmStart warm_start() const { return {basis_, cuts_}; }
  /// Tight cuts of `ws` (nonbasic logical) that were purged since are added
  /// back; cut rows missing from `ws` start with a basic logical.
  void set_warm_start(const WarmStart& ws);
  void set_lp_options(const lp::Options& opts) { lp_options_ = opts; }

  /// Optimal duals translated to the nonnegative convention.
  DualVector duals() const;
  /// Farkas certificate translated the same way (requires Infeasible).
  DualVector farkas_duals() const;
  DualVector translate(const std::vector<double>& row_values) const;

  /// c - z computed from a DualVector (independent of the LP).
  double reduced_cost(const Column& col, const DualVector& duals) const;
  /// Same with the column cost replaced by zero.
  double farkas_reduced_cost(const Column& col, const DualVector& duals) const;

  const lp::LinearProgram& lp() const { return lp_; }
  std::vector<std::string> row_names() const;
  std::vector<std::string> column_names() const;
  std::string dump() const;

 private:
  const Instance* inst_;
  RankMatrix ranks_;
  RowConvention convention_;
  int n_;
  lp::LinearProgram lp_;
  std::vector<Column> columns_;
  std::unordered_map<Column, int, ColumnKeyHash, ColumnKeyEqual> index_;
  std::vector<CutKey> cuts_;
  std::vector<bool> enabled_, retired_;
  std::vector<int> idle_;
  lp::Basis basis_;
  lp::FactorCache factor_;
  lp::Outcome last_;
  lp::Options lp_options_;
};

/// (lb1, lb2) from the restricted LP value and per-facility minimum reduced
/// costs; positive minima are clipped to zero.
std::pair<double, double> lp_bound_pair(double z, const std::vector<double>& facility_minima, int p);

}  // namespace domp
