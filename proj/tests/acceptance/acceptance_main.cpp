// Acceptance suite: one PASS/FAIL line per criterion, details on the
// following indented lines. Exits 1 when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "domp/bpc.hpp"
#include "domp/evaluation.hpp"
#include "domp/grasp.hpp"
#include "domp/instance.hpp"
#include "domp/master.hpp"
#include "domp/oracle.hpp"
#include "domp/pricing.hpp"
#include "domp/stabilization.hpp"
#include "domp/woc.hpp"

using namespace domp;

namespace {

int failures = 0;

struct Check {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("fail: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

void report(const Check& c) {
  std::cout << (c.ok ? "PASS " : "FAIL ") << c.name << '\n';
  for (const auto& s : c.notes) std::cout << "    " << s << '\n';
  std::cout.flush();
  if (!c.ok) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Reduced cost from the row definitions, written out independently of the
// master and pricing code. Couples are 0-based (client, position).
double reference_reduced_cost(const Instance& inst, const RankMatrix& R, int j,
                              const std::vector<Couple>& S, const DualVector& pi) {
  const int n = inst.n();
  double rc = 0.0;
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

// All feasible couple sets of facility j: clients in increasing rank toward
// j matched to strictly increasing positions.
void enumerate_sets(const RankMatrix& R, int n, int j,
                    const std::function<void(const std::vector<Couple>&)>& visit) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
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

Instance example() { return example_instance(); }

// ---------------------------------------------------------------------------

void criterion1() {
  Check c{"1 example fixtures"};
  const Instance inst = example();
  const RankMatrix R(inst);
  const int want_r[3][3] = {{1, 4, 6}, {5, 2, 8}, {7, 9, 3}};
  bool r_ok = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r_ok &= R.rank(i, j) == want_r[i][j];
  c.expect(r_ok, "rank matrix");

  DualVector printed = DualVector::zero(3);
  printed.alpha[1] = 2;
  printed.beta[2] = 10;
  const DCoefficients coef(inst, R, printed);
  const PricingMatrix d1 = build_pricing_matrix(coef, R, 0, {});
  const double want_d[3][3] = {{4, 2, -9}, {10, 4, -9}, {24, 12, -4}};
  bool d_ok = true;
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) d_ok &= d1.at(l, k) == want_d[l][k];
  c.expect(d_ok, "D_1 matrix");

  const PricingResult dp = exact_pricer(d1, printed);
  c.expect(dp.g == -9.0 && dp.couples == std::vector<Couple>{{0, 2}}, "DP g = -9, S = {(1,3)}");

  RestrictedMaster rm(inst, RowConvention::kCovering);
  rm.add_column(make_column(inst, 1, {{1, 1}}));
  rm.add_column(make_column(inst, 0, {{0, 0}, {2, 2}}));
  const lp::Outcome& out = rm.solve();
  const DualVector pi = rm.duals();
  c.expect(out.status == lp::Status::kOptimal && out.objective == 12.0, "initial LP objective 12");
  const bool duals_ok = pi.alpha == std::vector<double>{0, 2, 0} &&
                        pi.beta == std::vector<double>{0, 0, 10} && pi.delta == 0.0 &&
                        std::all_of(pi.gamma.begin(), pi.gamma.end(), [](double v) { return v == 0.0; }) &&
                        std::all_of(pi.epsilon.begin(), pi.epsilon.end(), [](double v) { return v == 0.0; });
  c.expect(duals_ok, "initial duals alpha_2 = 2, beta_3 = 10");
  c.note(fmt("solver duals: alpha=(%g,%g,%g) beta=(%g,%g,%g) objective %g", pi.alpha[0], pi.alpha[1],
             pi.alpha[2], pi.beta[0], pi.beta[1], pi.beta[2], out.objective));

  const auto cols = solution_to_columns(inst, R, FacilitySet{0, 2});
  c.expect(cols.size() == 2 && cols[0].facility == 0 &&
               cols[0].couples == std::vector<Couple>{{0, 0}, {1, 2}} && cols[1].facility == 2 &&
               cols[1].couples == std::vector<Couple>{{2, 1}},
           "set variables of J = {1,3}");
  report(c);
}

void criterion2() {
  Check c{"2 example column generation"};
  const Instance inst = example();
  RestrictedMaster rm(inst, RowConvention::kCovering);
  rm.add_column(make_column(inst, 1, {{1, 1}}));
  rm.add_column(make_column(inst, 0, {{0, 0}, {2, 2}}));
  StabConfig cfg;
  cfg.enabled = false;
  cfg.hurry_first = false;
  const CgReport rep = run_column_generation(rm, cfg, {});
  c.expect(rep.status == CgStatus::kConverged && std::abs(rep.value - 9.0) <= 1e-6, "LP value 9.00");
  const std::vector<double> want{-9, -11, -9};
  const bool have = !rep.trace.empty() && rep.trace.front().minima.size() == 3;
  c.expect(have && rep.trace.front().minima == want, "iteration-0 minima (-9, -11, -9)");
  for (const auto& it : rep.trace) {
    std::ostringstream os;
    os << "iter " << it.iteration << " z=" << it.z << " minima=(";
    for (std::size_t j = 0; j < it.minima.size(); ++j) os << (j ? "," : "") << it.minima[j];
    os << ")";
    c.note(os.str());
  }
  report(c);
}

// Criterion 3 runs feed 8, 9 and 10.
struct Run {
  Instance inst;
  Cost oracle = 0;
  SolveReport rep;
  double seconds = 0.0;
};

std::vector<Run> criterion3() {
  Check c{"3 oracle equivalence (20 instances, < 60 s)"};
  std::vector<Run> runs;
  double total = 0.0;
  int wrong = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 8 + t % 7;
    const int p = 2 + (3 * t) % (n / 2 - 1);
    Run run{generate(n, p, 100 + t), 0, {}, 0.0};
    run.oracle = solve_exhaustive(run.inst).best_value;
    SolveParams params;
    params.time_limit = 60.0;
    const auto t0 = std::chrono::steady_clock::now();
    run.rep = solve(run.inst, params);
    run.seconds = seconds_since(t0);
    total += run.seconds;
    const bool ok = run.rep.status == SolveStatus::kOptimal && run.rep.has_incumbent &&
                    run.rep.best_value == run.oracle && run.rep.decode_mismatches == 0;
    if (!ok) ++wrong;
    c.note(fmt("n=%d p=%d seed=%d oracle=%lld solve=%lld %s nodes=%d lb=%.2f t=%.2fs%s", n, p, 100 + t,
               static_cast<long long>(run.oracle), static_cast<long long>(run.rep.best_value),
               to_string(run.rep.status), run.rep.nodes, run.rep.lower_bound, run.seconds,
               ok ? "" : "  <-- mismatch"));
    runs.push_back(std::move(run));
  }
  c.expect(wrong == 0, fmt("%d instance(s) not solved to the oracle value", wrong));
  c.expect(total < 60.0, fmt("total %.1f s", total));
  c.note(fmt("total %.1f s", total));
  report(c);
  return runs;
}

void criterion4() {
  Check c{"4 MP root bound dominates WOC, mapped point is WOC-feasible"};
  std::mt19937_64 rng(4);
  double worst_bound = 0.0, worst_row = 0.0;
  for (int t = 0; t < 30; ++t) {
    const int n = 5 + static_cast<int>(rng() % 8);
    const int p = 1 + static_cast<int>(rng() % (n / 2));
    const Instance inst = generate(n, p, 400 + t);
    RestrictedMaster rm(inst);
    for (const auto& col : run_grasp(inst, {}).harvested) rm.add_column(col);
    const CgReport cg = run_column_generation(rm, {}, {});
    const WocSolution woc = solve_woc(inst, false);
    c.expect(cg.status == CgStatus::kConverged && woc.status == lp::Status::kOptimal,
             fmt("instance %d solved", t));
    worst_bound = std::min(worst_bound, cg.value - woc.value);
    c.expect(cg.value >= woc.value - 1e-6, fmt("instance %d: MP %.6f < WOC %.6f", t, cg.value, woc.value));

    const auto& primal = rm.last().primal;
    std::vector<double> values(primal.begin(), primal.begin() + rm.num_columns());
    MappedPoint pt = map_master_point(inst, rm.columns(), values);
    lift_cardinality(pt, inst.p());
    const WocModel model = build_woc(inst, false);
    const RowCheck rc = check_woc_rows(model, inst, pt, rm.convention() == RowConvention::kCovering);
    worst_row = std::max(worst_row, rc.max_violation);
    c.expect(rc.max_violation <= 1e-7, fmt("instance %d: WOC row %d violated by %g", t, rc.worst_row,
                                           rc.max_violation));
  }
  c.note(fmt("min (MP - WOC) = %.6f, max WOC row violation = %.3g", worst_bound, worst_row));
  report(c);
}

void criterion5() {
  Check c{"5 pricer equals enumeration; hurry reduced costs exact"};
  std::mt19937_64 rng(5);
  auto uni = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  int dp_bad = 0, hurry_bad = 0, emitted = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = uni(2, 7);
    const Instance inst = generate(n, uni(1, n), 500 + t);
    const RankMatrix R(inst);
    // Integer duals keep every sum exact, so equality is meaningful.
    DualVector pi = DualVector::zero(n);
    const int scale = 40 * n;
    for (int i = 0; i < n; ++i) {
      pi.alpha[i] = uni(0, 20 * scale);
      pi.beta[i] = uni(0, 20 * scale);
      pi.gamma[i] = uni(0, scale);
    }
    pi.delta = uni(0, scale);
    for (int k = 1; k < n; ++k) pi.epsilon[k] = uni(0, 2);
    const int ncuts = uni(0, 2 * n);
    for (int q = 0; q < ncuts; ++q) {
      const CutKey key{uni(0, n - 1), uni(0, n - 1), uni(1, n - 1)};
      if (std::find(pi.cuts.begin(), pi.cuts.end(), key) != pi.cuts.end()) continue;
      pi.cuts.push_back(key);
      pi.zeta.push_back(uni(0, 5 * scale));
    }

    const DCoefficients coef(inst, R, pi);
    for (int j = 0; j < n; ++j) {
      const PricingResult dp = exact_pricer(build_pricing_matrix(coef, R, j, {}), pi);
      const double base = pi.delta + pi.gamma[j];
      double best = 0.0;
      enumerate_sets(R, n, j, [&](const std::vector<Couple>& S) {
        if (!S.empty()) best = std::min(best, reference_reduced_cost(inst, R, j, S, pi) - base);
      });
      if (dp.g != best) ++dp_bad;
      if (!dp.couples.empty() && reference_reduced_cost(inst, R, j, dp.couples, pi) != dp.reduced_cost)
        ++dp_bad;
    }
    for (const auto& pc : hurry_pricer(inst, R, pi, {})) {
      ++emitted;
      if (reference_reduced_cost(inst, R, pc.column.facility, pc.column.couples, pi) != pc.reduced_cost)
        ++hurry_bad;
    }
  }
  c.expect(dp_bad == 0, fmt("%d DP mismatches", dp_bad));
  c.expect(hurry_bad == 0, fmt("%d hurry mismatches", hurry_bad));
  c.expect(emitted > 0, "hurry pricer emitted columns");
  c.note(fmt("100 instances, %d hurry columns checked", emitted));
  report(c);
}

void criterion6() {
  Check c{"6 zeta prefix/suffix sums bit-exact"};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  long lookups = 0;
  int bad = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const Instance inst = generate(n, 1 + static_cast<int>(rng() % n), 600 + t);
    const RankMatrix R(inst);
    std::vector<CutKey> cuts;
    std::vector<double> zeta;
    const int want = 1 + static_cast<int>(rng() % (n * n));
    for (int q = 0; q < want; ++q) {
      const CutKey key{static_cast<int>(rng() % n), static_cast<int>(rng() % n),
                       1 + static_cast<int>(rng() % (n - 1))};
      if (std::find(cuts.begin(), cuts.end(), key) != cuts.end()) continue;
      cuts.push_back(key);
      zeta.push_back(val(rng));
    }
    const ZetaSums sums(R, cuts, zeta);
    // zeta by (level, rank)
    std::map<std::pair<int, int>, double> at;
    for (std::size_t q = 0; q < cuts.size(); ++q)
      at[{cuts[q].position, R.rank(cuts[q].client, cuts[q].facility)}] = zeta[q];
    for (int k = 1; k < n; ++k)
      for (int r = 1; r <= n * n; ++r) {
        double pre = 0.0, suf = 0.0;
        for (int s = 1; s <= r; ++s)
          if (auto it = at.find({k, s}); it != at.end()) pre += it->second;
        for (int s = n * n; s >= r; --s)
          if (auto it = at.find({k, s}); it != at.end()) suf += it->second;
        lookups += 2;
        if (sums.prefix(k, r) != pre || sums.suffix(k, r) != suf) ++bad;
      }
  }
  c.expect(bad == 0, fmt("%d mismatching lookups", bad));
  c.note(fmt("%ld lookups", lookups));
  report(c);
}

void criterion7() {
  Check c{"7 stabilization settings agree on the root LP"};
  double spread_max = 0.0;
  long iters[3] = {0, 0, 0};
  for (int t = 0; t < 10; ++t) {
    const int n = 7 + t % 6;
    const Instance inst = generate(n, 2 + t % (n / 2 - 1), 700 + t);
    double v[3];
    for (int s = 0; s < 3; ++s) {
      SolveParams params;
      params.use_cuts = false;
      params.stab.delta_init = s == 0 ? 0.2 : 0.6;
      params.stab.enabled = s != 2;
      const RelaxReport r = solve_relaxation(inst, params);
      v[s] = r.lp_value;
      iters[s] += r.iterations;
    }
    const double spread = std::max({v[0], v[1], v[2]}) - std::min({v[0], v[1], v[2]});
    spread_max = std::max(spread_max, spread);
    c.expect(spread <= 1e-6, fmt("instance %d: values %.9f %.9f %.9f", t, v[0], v[1], v[2]));
  }
  c.note(fmt("largest spread %.3g", spread_max));
  c.note(fmt("total CG iterations: delta 0.2 = %ld, 0.6 = %ld, off = %ld", iters[0], iters[1], iters[2]));
  c.note(iters[1] < iters[2] ? "trend: 0.6 needs fewer iterations than off"
                             : "trend: 0.6 does not reduce iterations here");
  report(c);
}

// Fractional point: 0.75 on the single-couple columns (j=1, {(2,1)}) and
// (j=1, {(1,2)}) of the example instance (1-based). Client 1 is cheaper at
// facility 1 than client 2, yet sits at the later position, so the cut
// (1,1,2) has lhs 1.5.
void criterion8(const std::vector<Run>& runs) {
  Check c{"8 cut validity, separation and monotone root bound"};
  double worst_lhs = 0.0;
  for (const auto& r : runs) worst_lhs = std::max(worst_lhs, r.rep.max_cut_lhs_at_integral);
  c.expect(worst_lhs <= 1.0 + 1e-6, fmt("integral point with cut lhs %.6f", worst_lhs));
  c.note(fmt("largest cut lhs over integral nodes %.6f", worst_lhs));

  const Instance inst = example();
  const RankMatrix R(inst);
  const std::vector<Column> cols{make_column(inst, 0, {{1, 0}}), make_column(inst, 0, {{0, 1}})};
  const OriginalPoint x = aggregate_x(inst, cols, {0.75, 0.75});
  const auto cuts = separate_cuts(x, R, 100);
  const double top = cuts.empty() ? 0.0 : cuts.front().violation;
  c.expect(std::abs(top - 0.5) <= 1e-6, fmt("constructed point: violation %.6f", top));

  int decreases = 0;
  for (const auto& r : runs)
    for (std::size_t q = 1; q < r.rep.root_lp_history.size(); ++q)
      if (r.rep.root_lp_history[q] < r.rep.root_lp_history[q - 1] - 1e-6) ++decreases;
  c.expect(decreases == 0, fmt("%d root cut rounds lowered the LP value", decreases));
  report(c);
}

void criterion9(const std::vector<Run>& runs) {
  Check c{"9 GRASP never below the optimum, matches it on >= 80%"};
  int below = 0, equal = 0;
  for (const auto& r : runs) {
    if (r.rep.grasp_value < r.oracle) ++below;
    if (r.rep.grasp_value == r.oracle) ++equal;
  }
  c.expect(below == 0, fmt("%d GRASP values below the oracle", below));
  c.expect(equal * 5 >= static_cast<int>(runs.size()) * 4, fmt("matched %d of %zu", equal, runs.size()));
  c.note(fmt("GRASP matched the optimum on %d of %zu", equal, runs.size()));
  report(c);
}

void criterion10(const std::vector<Run>& runs) {
  Check c{"10 tree bound invariants"};
  int lb_bad = 0, ub_bad = 0, child_bad = 0, y_bad = 0, integral = 0;
  for (const auto& r : runs) {
    const auto& lb = r.rep.lb_history;
    const auto& ub = r.rep.ub_history;
    for (std::size_t q = 1; q < lb.size(); ++q)
      if (lb[q] < lb[q - 1] - 1e-6) ++lb_bad;
    for (std::size_t q = 1; q < ub.size(); ++q)
      if (ub[q] > ub[q - 1] + 1e-9) ++ub_bad;
    for (const auto& node : r.rep.nodes_log) {
      if (node.parent >= 0 && node.converged && node.value < node.parent_value - 1e-6) ++child_bad;
      if (node.outcome == NodeOutcome::kIntegral) {
        ++integral;
        if (!node.y_integral) ++y_bad;
      }
    }
  }
  c.expect(lb_bad == 0, fmt("LB decreased %d times", lb_bad));
  c.expect(ub_bad == 0, fmt("UB increased %d times", ub_bad));
  c.expect(child_bad == 0, fmt("%d children below their parent", child_bad));
  c.expect(y_bad == 0, fmt("%d integral nodes with fractional master values", y_bad));
  c.note(fmt("%d integral nodes checked", integral));
  report(c);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  const std::vector<Run> runs = criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8(runs);
  criterion9(runs);
  criterion10(runs);
  std::cout << fmt("%d of 10 criteria failed, %.1f s", failures, seconds_since(t0)) << '\n';
  return failures == 0 ? 0 : 1;
}
