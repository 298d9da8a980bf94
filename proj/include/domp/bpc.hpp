#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/grasp.hpp"
#include "domp/instance.hpp"
#include "domp/master.hpp"
#include "domp/pricing.hpp"
#include "domp/stabilization.hpp"

namespace domp {

/// x_ij^k values, dense n^3, indexed [(i * n + j) * n + k].
class OriginalPoint {
 public:
  explicit OriginalPoint(int n = 0) : n_(n), x_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int n() const { return n_; }
  double& at(int i, int j, int k) { return x_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double at(int i, int j, int k) const { return x_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  /// sum over i, k of x_ij^k
  double facility_load(int j) const;
  bool integral(double tol) const;

 private:
  int n_;
  std::vector<double> x_;
};

/// x = sum of column values over the columns covering each triplet.
OriginalPoint aggregate_x(const Instance& inst, const std::vector<Column>& columns,
                          const std::vector<double>& values);

/// With s- = lambda^k c_ij / x and s+ = lambda^k c_ij / (1 - x):
enum class BranchStrategy {
  kWeighted = 1,  // argmin theta * s- + (1 - theta) * s+
  kMin = 2,       // argmin min(s-, s+)
  kMax = 3,       // argmin max(s-, s+)
};

/// Branching triplet among the fractional x (strictly inside (tol, 1 - tol)),
/// or nullopt when x is integral. Ties go to the lexicographically smallest
/// (i, j, k).
std::optional<Triplet> select_branching_variable(const Instance& inst, const OriginalPoint& x,
                                                 BranchStrategy strategy, double theta = 0.5,
                                                 double tol = 1e-6);

struct SeparatedCut {
  CutKey key;
  double violation = 0.0;
};

/// Left-hand side of the strong order cut (i, j, k) at x.
double cut_lhs(const OriginalPoint& x, const RankMatrix& ranks, const CutKey& key);

/// Violated cuts (lhs - 1 > tol), most violated first, ties in (i, j, k)
/// order; at most `max_cuts`, skipping keys in `existing`.
std::vector<SeparatedCut> separate_cuts(const OriginalPoint& x, const RankMatrix& ranks, int max_cuts,
                                        double tol = 1e-4, const std::vector<CutKey>& existing = {});

/// Open facilities of an integral point, padded to p with the smallest
/// unused indices.
FacilitySet decode_incumbent(const OriginalPoint& x, int p, double tol = 1e-6);

struct SolveParams {
  double time_limit = 1800.0;
  bool use_grasp = true;
  GraspConfig grasp;
  StabConfig stab;
  BranchStrategy strategy = BranchStrategy::kWeighted;
  double theta = 0.5;
  bool use_cuts = true;
  int root_cut_rounds = 50;
  int node_cut_rounds = 1;
  int max_cuts_per_round = 100;
  double int_tol = 1e-6;
  double cut_tol = 1e-4;
  /// Columns idle (zero and nonbasic) for this many master solves are
  /// fixed to zero until pricing finds them again; 0 keeps every column.
  int column_idle_limit = 100;
  RowConvention convention = RowConvention::kPartitioning;
  /// Variables fixed to zero at every node (preprocessing input).
  std::vector<Triplet> fixed_zero;
  int threads = 1;
  std::ostream* log = nullptr;
};

enum class SolveStatus { kOptimal, kTimeLimit };
const char* to_string(SolveStatus s);

enum class NodeOutcome { kIntegral, kBranched, kPrunedBound, kPrunedInfeasible, kOpen };
const char* to_string(NodeOutcome s);

struct NodeRecord {
  int id = 0;
  int parent = -1;
  int depth = 0;
  double parent_value = 0.0;  // parent's final LP value (root: 0)
  double value = 0.0;         // final LP value, valid when the LP converged
  bool converged = false;
  NodeOutcome outcome = NodeOutcome::kOpen;
  bool y_integral = false;    // all master values integral (Integral nodes)
  int cut_rounds = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kTimeLimit;
  bool has_incumbent = false;
  Cost best_value = 0;
  FacilitySet best_set;
  double lower_bound = 0.0;
  double gap_pct = 0.0;
  int nodes = 0;
  int columns = 0;
  int cuts = 0;
  double time_s = 0.0;
  double root_lp = 0.0;          // root value before cuts
  double root_lp_final = 0.0;    // root value after the last cut round
  std::vector<double> root_lp_history;  // root value after each cut round
  double root_lower_bound = 0.0; // max(lb1, lb2) at the root
  int root_cg_iterations = 0;
  Cost grasp_value = 0;
  std::vector<NodeRecord> nodes_log;
  std::vector<double> lb_history, ub_history;
  int integral_nodes = 0;
  /// Integral nodes whose decoded ordered value differs from the LP value.
  int decode_mismatches = 0;
  /// Largest cut left-hand side over all candidate cuts at integral nodes.
  double max_cut_lhs_at_integral = 0.0;
};

SolveReport solve(const Instance& inst, const SolveParams& params = {});

/// Root relaxation only: GRASP columns, column generation, optional cuts.
struct RelaxReport {
  double lp_value = 0.0;
  double lower_bound = 0.0;
  int columns = 0;
  int cuts = 0;
  int iterations = 0;
  double time_s = 0.0;
};
RelaxReport solve_relaxation(const Instance& inst, const SolveParams& params = {});

/// Triplets from a fixings file: one "i j k" per line, 1-based.
std::vector<Triplet> load_fixings(const std::string& path, int n);

}  // namespace domp
