#include "domp/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace domp {

const char* to_string(CgStatus s) {
  switch (s) {
    case CgStatus::kConverged: return "Converged";
    case CgStatus::kIterationLimit: return "IterationLimit";
    case CgStatus::kInfeasible: return "Infeasible";
    case CgStatus::kTimeLimit: return "TimeLimit";
    case CgStatus::kCutoff: return "Cutoff";
  }
  return "?";
}

namespace {

struct RoundResult {
  std::vector<Column> candidates;
  std::vector<double> minima;  // only for exact rounds
};

RoundResult exact_round(const RestrictedMaster& rm, const DualVector& pi, const FixingMask& mask,
                        bool farkas, int threads) {
  RoundResult out;
  const auto results =
      exact_pricing_round(rm.instance(), rm.ranks(), pi, mask, farkas, threads);
  for (const auto& res : results) {
    out.minima.push_back(res.reduced_cost);
    if (!res.couples.empty()) out.candidates.push_back(make_column(rm.instance(), res.facility, res.couples));
  }
  return out;
}

// Adds the candidates whose reduced cost at `check` is below -tol.
int add_improving(RestrictedMaster& rm, const std::vector<Column>& candidates, const DualVector& check,
                  double tol, bool farkas, std::vector<Column>* added = nullptr) {
  int count = 0;
  for (const auto& col : candidates) {
    const double rc = farkas ? rm.farkas_reduced_cost(col, check) : rm.reduced_cost(col, check);
    if (!(rc < -tol)) continue;
    if (rm.add_column(col).second) {
      ++count;
      if (added) added->push_back(col);
    }
  }
  return count;
}

double lagrangian_bound(const DualVector& pi, int p, const std::vector<double>& minima) {
  double lb = pi.objective(p);
  for (double m : minima) lb += std::min(0.0, m);
  return lb;
}

}  // namespace

CgReport run_column_generation(RestrictedMaster& rm, const StabConfig& cfg, const FixingMask& mask,
                               std::ostream* log) {
  if (cfg.delta_init <= 0.0 || cfg.delta_init > 1.0)
    throw std::invalid_argument("delta_init must be in (0, 1]");
  const Instance& inst = rm.instance();
  const int n = inst.n();
  const int p = inst.p();
  CgReport report;
  double delta = cfg.enabled ? cfg.delta_init : 1.0;
  DualVector pi_bar = DualVector::zero(n);
  double lb_pi_bar = 0.0;
  double best_bound = -lp::kInf;

  auto out_of_time = [&] {
    return cfg.deadline && std::chrono::steady_clock::now() >= *cfg.deadline;
  };

  for (int iter = 0;; ++iter) {
    if (iter >= cfg.max_iterations) {
      report.status = CgStatus::kIterationLimit;
      break;
    }
    if (out_of_time()) {
      report.status = CgStatus::kTimeLimit;
      break;
    }
    const lp::Outcome& outcome = rm.solve();
    CgIteration step;
    step.iteration = iter;
    report.iterations = iter + 1;

    if (outcome.status == lp::Status::kInfeasible) {
      const DualVector f = rm.farkas_duals();
      const RoundResult round = exact_round(rm, f, mask, true, cfg.threads);
      const int added = add_improving(rm, round.candidates, f, cfg.rc_tol, true);
      ++report.farkas_rounds;
      step.farkas = true;
      step.columns_added = added;
      step.delta = delta;
      step.lower_bound = best_bound;
      report.columns_added += added;
      report.trace.push_back(step);
      if (log) *log << "cg " << iter << " farkas added=" << added << '\n';
      if (added == 0) {
        report.status = CgStatus::kInfeasible;
        break;
      }
      continue;
    }
    if (outcome.status != lp::Status::kOptimal)
      throw std::runtime_error(std::string("master LP returned ") + lp::to_string(outcome.status));

    const double z = outcome.objective;
    report.value = z;
    if (best_bound == -lp::kInf) best_bound = 0.0;  // costs are nonnegative
    const DualVector pi_r = rm.duals();
    const bool stabilized = cfg.enabled && delta < 1.0;
    const DualVector pi_st = stabilized ? DualVector::combine(pi_r, pi_bar, delta) : pi_r;

    int added = 0;
    bool exact_at_st = false;
    std::vector<double> minima_st;
    std::vector<Column> added_cols;
    if (cfg.hurry_first) {
      std::vector<Column> cands;
      for (auto& pc : hurry_pricer(inst, rm.ranks(), pi_st, mask, cfg.rc_tol)) cands.push_back(std::move(pc.column));
      added = add_improving(rm, cands, pi_r, cfg.rc_tol, false, &added_cols);
    }
    if (added == 0) {
      const RoundResult round = exact_round(rm, pi_st, mask, false, cfg.threads);
      exact_at_st = true;
      minima_st = round.minima;
      added = add_improving(rm, round.candidates, pi_r, cfg.rc_tol, false, &added_cols);
    }

    // Lagrangian bound at the pricing duals.
    double lb_st;
    if (exact_at_st) {
      lb_st = lagrangian_bound(pi_st, p, minima_st);
      best_bound = std::max(best_bound, lb_st);
    } else {
      lb_st = pi_st.objective(p);
      for (const auto& col : added_cols) lb_st += rm.reduced_cost(col, pi_st);
    }
    if (exact_at_st && !stabilized) step.minima = minima_st;

    const int added_at_st = added;
    bool converged = false;
    if (added == 0) {
      if (stabilized) {
        // Mispricing: certify at the master duals.
        const RoundResult round = exact_round(rm, pi_r, mask, false, cfg.threads);
        step.minima = round.minima;
        best_bound = std::max(best_bound, lagrangian_bound(pi_r, p, round.minima));
        added = add_improving(rm, round.candidates, pi_r, cfg.rc_tol, false);
        if (added == 0) {
          converged = true;
          report.minima = round.minima;
        }
      } else {
        converged = true;
        report.minima = minima_st;
      }
    }

    if (added_at_st == 0 || lb_st > lb_pi_bar) {
      pi_bar = pi_st;
      lb_pi_bar = lb_st;
    }
    const double gap = z > 1e-9 ? (z - best_bound) / z : z - best_bound;
    if (cfg.enabled && gap < 1.0 - delta) delta = 1.0 - gap;

    step.z = z;
    step.lower_bound = best_bound;
    step.delta = delta;
    step.columns_added = added;
    report.columns_added += added;
    report.lower_bound = best_bound;
    report.trace.push_back(step);
    if (log)
      *log << "cg " << iter << " z=" << z << " lb=" << best_bound << " delta=" << delta
           << " added=" << added << " pivots=" << outcome.iterations << '\n';
    if (converged) {
      report.status = CgStatus::kConverged;
      report.lower_bound = std::max(best_bound, z);
      break;
    }
    if (cfg.cutoff && best_bound >= *cfg.cutoff - 1e-6) {
      report.status = CgStatus::kCutoff;
      break;
    }
  }
  return report;
}

}  // namespace domp
