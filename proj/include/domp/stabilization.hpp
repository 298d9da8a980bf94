#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <vector>

#include "domp/master.hpp"
#include "domp/pricing.hpp"

namespace domp {

struct StabConfig {
  double delta_init = 0.6;
  double gap_tol = 1e-6;
  bool enabled = true;        // false: duals are used as returned (delta = 1)
  bool hurry_first = true;
  double rc_tol = 1e-6;       // add a column when its reduced cost < -rc_tol
  int max_iterations = 100000;
  int threads = 1;
  /// Stop early once a valid lower bound reaches cutoff - 1e-6.
  std::optional<double> cutoff;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class CgStatus { kConverged, kIterationLimit, kInfeasible, kTimeLimit, kCutoff };
const char* to_string(CgStatus s);

struct CgIteration {
  int iteration = 0;
  bool farkas = false;
  double z = 0.0;             // restricted LP value (0 on Farkas rounds)
  double lower_bound = 0.0;   // best valid bound so far
  double delta = 1.0;
  int columns_added = 0;
  /// Per-facility minimum reduced costs at the master duals, when the
  /// exact pricer ran at those duals this iteration; empty otherwise.
  std::vector<double> minima;
};

struct CgReport {
  CgStatus status = CgStatus::kIterationLimit;
  double value = 0.0;
  int iterations = 0;
  int farkas_rounds = 0;
  int columns_added = 0;
  double lower_bound = 0.0;        // best valid Lagrangian bound
  std::vector<double> minima;      // per facility, at termination
  std::vector<CgIteration> trace;
};

/// Solves the restricted master to LP optimality over all columns allowed
/// by `mask`, with the convex dual combination of the stabilization scheme.
CgReport run_column_generation(RestrictedMaster& rm, const StabConfig& cfg, const FixingMask& mask,
                               std::ostream* log = nullptr);

}  // namespace domp
