#pragma once

#include <string>
#include <vector>

#include "domp/bpc.hpp"
#include "domp/instance.hpp"
#include "domp/lp.hpp"
#include "domp/master.hpp"

namespace domp {

/// Compact formulation with weak order rows, optionally strong order rows,
/// as an LP relaxation (all variables in [0, 1]).
struct WocModel {
  int n = 0;
  bool strong = false;
  lp::LinearProgram lp;

  int x_index(int i, int j, int k) const { return (i * n + j) * n + k; }
  int y_index(int j) const { return n * n * n + j; }
  int num_variables() const { return lp.num_columns(); }

  int client_row(int i) const { return i; }
  int position_row(int k) const { return n + k; }
  int link_row(int i, int j) const { return 2 * n + i * n + j; }
  int cardinality_row() const { return 2 * n + n * n; }
  /// Weak order row for 0-based position k >= 1.
  int weak_row(int k) const { return 2 * n + n * n + k; }
  /// Strong order row for (i, j, k), k >= 1.
  int strong_row(int i, int j, int k) const { return 3 * n + n * n + (i * n + j) * (n - 1) + (k - 1); }
};

inline constexpr int kWocMaxN = 60;

WocModel build_woc(const Instance& inst, bool strong, int max_n = kWocMaxN);

struct MappedPoint {
  OriginalPoint x;
  std::vector<double> y;
};

/// x_ij^k = sum of y_S^j over columns with (i, k) in S; y_j = sum of y_S^j.
MappedPoint map_master_point(const Instance& inst, const std::vector<Column>& columns,
                             const std::vector<double>& values);

/// Raises y (smallest indices first, each up to 1) until sum y = p. Opening
/// extra facilities leaves the cost unchanged.
void lift_cardinality(MappedPoint& point, int p);

struct RowCheck {
  double max_violation = 0.0;
  int worst_row = -1;
};

/// Largest violation of the WOC rows (and [0, 1] bounds) at the point.
/// With `relax_equalities` the client and position rows are read as >= 1.
RowCheck check_woc_rows(const WocModel& model, const Instance& inst, const MappedPoint& point,
                        bool relax_equalities = false);

struct WocSolution {
  lp::Status status = lp::Status::kIterationLimit;
  double value = 0.0;
  int variables = 0;
  std::int64_t iterations = 0;
};

WocSolution solve_woc(const Instance& inst, bool strong, int max_n = kWocMaxN);

struct GapReport {
  double mp_lp = 0.0;
  double woc_lp = 0.0;
  double gap_mp_pct = 0.0;
  double gap_woc_pct = 0.0;
  int mp_columns = 0;
  int woc_variables = 0;
};

/// 100 (z* - z_LP) / z* for both relaxations (root MP without cuts).
GapReport gap_report(const Instance& inst, double incumbent_value, const SolveParams& params = {});

double gap_lp_percent(double incumbent, double lp_value);

/// Plain-text LP listing: objective, rows and bounds sections.
std::string export_lp_text(const WocModel& model);

}  // namespace domp
