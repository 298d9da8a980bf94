#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace domp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kGreaterEqual, kLessEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
enum class VarStatus : unsigned char { kBasic, kAtLower, kAtUpper };

const char* to_string(Status s);

using Entry = std::pair<int, double>;  // (index, coefficient)

/// min c'x subject to row constraints and column bounds. Columns are stored
/// sparse; rows only carry sense and right-hand side.
class LinearProgram {
 public:
  int add_row(RowSense sense, double rhs, std::span<const Entry> column_entries = {});
  int add_column(double cost, std::span<const Entry> row_entries, double lower = 0.0,
                 double upper = kInf);
  void set_column_bounds(int column, double lower, double upper);
  void set_cost(int column, double cost);
  /// Deletes the flagged rows; later rows move up.
  void remove_rows(const std::vector<bool>& remove);

  int num_rows() const { return static_cast<int>(senses_.size()); }
  int num_columns() const { return static_cast<int>(costs_.size()); }
  RowSense sense(int row) const { return senses_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  double cost(int column) const { return costs_[column]; }
  double lower(int column) const { return lower_[column]; }
  double upper(int column) const { return upper_[column]; }
  const std::vector<Entry>& column(int column) const { return columns_[column]; }

  /// Row activities a_r x for a given primal vector.
  std::vector<double> activities(std::span<const double> x) const;

 private:
  std::vector<double> costs_, lower_, upper_;
  std::vector<std::vector<Entry>> columns_;  // (row, coef), sorted by row
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
};

/// Simplex basis. One status per column and one per row logical. Sizes may
/// be smaller than the current program: missing columns start at their
/// lower bound and missing rows start with a basic logical. A basis with
/// the wrong number of basics is trimmed or padded with logicals.
struct Basis {
  std::vector<VarStatus> columns;
  std::vector<VarStatus> rows;
  bool empty() const { return columns.empty() && rows.empty(); }
};

/// Leaving-variable choice among ratio-test ties.
enum class TieRule {
  kLargestPivot,   // largest |pivot|, then lowest basic index
  kLowestIndex,    // lowest basic variable index
  kHighestIndex,   // highest basic variable index
  kLexicographic,  // lexicographically smallest row of B^-1 / pivot
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::int64_t iteration_limit = 1'000'000;
  int refactor_interval = 100;
  int degenerate_streak = 50;  // consecutive degenerate pivots before acting
  /// After the first degenerate streak all finite bounds of non-fixed
  /// variables are expanded by random amounts in [p, 2p] until the perturbed
  /// problem is solved; the original bounds are then restored. Later streaks
  /// switch to Bland's rule. Zero disables the perturbation.
  double perturbation = 1e-6;
  TieRule tie_rule = TieRule::kLargestPivot;
  /// Run dual simplex first when a warm basis is primal infeasible.
  bool dual_simplex = true;
};

struct Outcome {
  Status status = Status::kIterationLimit;
  double objective = 0.0;
  std::vector<double> primal;    // per column
  std::vector<double> activity;  // per row, a_r x
  /// Row duals, sign: >= rows nonnegative, <= rows nonpositive. Reduced
  /// cost of column j is c_j - sum_r duals[r] a_rj.
  std::vector<double> duals;
  /// Infeasibility certificate, same sign convention as duals: with
  /// g = f'A, max over the column box of g'x is below f'b.
  std::vector<double> farkas;
  Basis basis;
  std::int64_t iterations = 0;
};

/// Basis inverse carried between solves of one program that only grows by
/// appended rows and columns (bounds and costs may change freely). A warm
/// basis whose basic set matches the cached one, plus basic logicals on new
/// rows, skips the refactorization.
class FactorCache {
 public:
  FactorCache();
  ~FactorCache();
  FactorCache(FactorCache&&) noexcept;
  FactorCache& operator=(FactorCache&&) noexcept;
  void clear();

  struct State;
  std::unique_ptr<State> state;
};

Outcome solve(const LinearProgram& lp, const Basis* warm = nullptr, const Options& opts = {},
              FactorCache* cache = nullptr);

/// Amount by which the certificate proves infeasibility (positive means
/// valid): f'b - max_{l<=x<=u} (f'A)x. Returns -inf when the sign pattern
/// is wrong or the maximum is unbounded.
double farkas_margin(const LinearProgram& lp, std::span<const double> f, double sign_tol = 1e-9);

bool verify_farkas(const LinearProgram& lp, std::span<const double> f, double tol = 1e-7);

/// Human-readable listing: one line per row with sense, rhs and nonzeros.
std::string dump(const LinearProgram& lp, std::span<const std::string> row_names = {},
                 std::span<const std::string> column_names = {});

}  // namespace domp::lp
