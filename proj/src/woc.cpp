#include "domp/woc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace domp {

WocModel build_woc(const Instance& inst, bool strong, int max_n) {
  const int n = inst.n();
  if (n > max_n)
    throw std::invalid_argument("WOC model limited to n <= " + std::to_string(max_n) + " (got " +
                                std::to_string(n) + ")");
  const RankMatrix ranks(inst);
  const double n2 = static_cast<double>(n) * n;
  WocModel m;
  m.n = n;
  m.strong = strong;

  for (int i = 0; i < n; ++i) m.lp.add_row(lp::RowSense::kEqual, 1.0);
  for (int k = 0; k < n; ++k) m.lp.add_row(lp::RowSense::kEqual, 1.0);
  for (int l = 0; l < n * n; ++l) m.lp.add_row(lp::RowSense::kLessEqual, 0.0);
  m.lp.add_row(lp::RowSense::kEqual, static_cast<double>(inst.p()));
  for (int k = 1; k < n; ++k) m.lp.add_row(lp::RowSense::kLessEqual, n2);
  if (strong)
    for (int l = 0; l < n * n * (n - 1); ++l) m.lp.add_row(lp::RowSense::kLessEqual, 1.0);

  std::vector<lp::Entry> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int s = ranks.rank(i, j);
      for (int k = 0; k < n; ++k) {
        entries.clear();
        entries.emplace_back(m.client_row(i), 1.0);
        entries.emplace_back(m.position_row(k), 1.0);
        entries.emplace_back(m.link_row(i, j), 1.0);
        if (k >= 1) entries.emplace_back(m.weak_row(k), n2 - s + 1);
        if (k + 1 < n) entries.emplace_back(m.weak_row(k + 1), static_cast<double>(s));
        if (strong) {
          // Strong row (a, b, kk) holds x^kk at ranks <= r_ab and x^(kk-1)
          // at ranks >= r_ab.
          for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
              const int ref = ranks.rank(a, b);
              if (k >= 1 && s <= ref) entries.emplace_back(m.strong_row(a, b, k), 1.0);
              if (k + 1 < n && s >= ref) entries.emplace_back(m.strong_row(a, b, k + 1), 1.0);
            }
          }
        }
        std::sort(entries.begin(), entries.end());
        const double cost = static_cast<double>(inst.weight(k) * inst.cost(i, j));
        m.lp.add_column(cost, entries, 0.0, 1.0);
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    entries.clear();
    for (int i = 0; i < n; ++i) entries.emplace_back(m.link_row(i, j), -1.0);
    entries.emplace_back(m.cardinality_row(), 1.0);
    std::sort(entries.begin(), entries.end());
    m.lp.add_column(0.0, entries, 0.0, 1.0);
  }
  return m;
}

MappedPoint map_master_point(const Instance& inst, const std::vector<Column>& columns,
                             const std::vector<double>& values) {
  MappedPoint pt;
  pt.x = aggregate_x(inst, columns, values);
  pt.y.assign(inst.n(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) pt.y[columns[c].facility] += values[c];
  return pt;
}

void lift_cardinality(MappedPoint& point, int p) {
  double total = 0.0;
  for (double v : point.y) total += v;
  for (std::size_t j = 0; j < point.y.size() && total < p; ++j) {
    const double room = std::min(1.0 - point.y[j], p - total);
    if (room <= 0) continue;
    point.y[j] += room;
    total += room;
  }
}

RowCheck check_woc_rows(const WocModel& model, const Instance& inst, const MappedPoint& point,
                        bool relax_equalities) {
  const int n = model.n;
  if (inst.n() != n || point.x.n() != n) throw std::invalid_argument("dimension mismatch");
  std::vector<double> values(model.lp.num_columns());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) values[model.x_index(i, j, k)] = point.x.at(i, j, k);
  for (int j = 0; j < n; ++j) values[model.y_index(j)] = point.y[j];

  RowCheck out;
  auto note = [&](double viol, int row) {
    if (viol > out.max_violation) {
      out.max_violation = viol;
      out.worst_row = row;
    }
  };
  for (int c = 0; c < model.lp.num_columns(); ++c) {
    note(model.lp.lower(c) - values[c], -1);
    note(values[c] - model.lp.upper(c), -1);
  }
  const auto act = model.lp.activities(values);
  for (int r = 0; r < model.lp.num_rows(); ++r) {
    const double rhs = model.lp.rhs(r);
    const bool relaxable = r < 2 * n;
    switch (model.lp.sense(r)) {
      case lp::RowSense::kLessEqual: note(act[r] - rhs, r); break;
      case lp::RowSense::kGreaterEqual: note(rhs - act[r], r); break;
      case lp::RowSense::kEqual:
        if (relax_equalities && relaxable) note(rhs - act[r], r);
        else note(std::abs(act[r] - rhs), r);
        break;
    }
  }
  return out;
}

WocSolution solve_woc(const Instance& inst, bool strong, int max_n) {
  const WocModel m = build_woc(inst, strong, max_n);
  const lp::Outcome out = lp::solve(m.lp);
  WocSolution s;
  s.status = out.status;
  s.value = out.objective;
  s.variables = m.num_variables();
  s.iterations = out.iterations;
  return s;
}

double gap_lp_percent(double incumbent, double lp_value) {
  if (incumbent == 0.0) return incumbent - lp_value > 1e-9 ? 100.0 : 0.0;
  return 100.0 * (incumbent - lp_value) / incumbent;
}

GapReport gap_report(const Instance& inst, double incumbent_value, const SolveParams& params) {
  SolveParams root = params;
  root.use_cuts = false;
  const RelaxReport mp = solve_relaxation(inst, root);
  const WocSolution woc = solve_woc(inst, false);
  if (woc.status != lp::Status::kOptimal)
    throw std::runtime_error(std::string("WOC relaxation returned ") + lp::to_string(woc.status));
  GapReport g;
  g.mp_lp = mp.lp_value;
  g.woc_lp = woc.value;
  g.mp_columns = mp.columns;
  g.woc_variables = woc.variables;
  g.gap_mp_pct = gap_lp_percent(incumbent_value, mp.lp_value);
  g.gap_woc_pct = gap_lp_percent(incumbent_value, woc.value);
  return g;
}

std::string export_lp_text(const WocModel& model) {
  const int n = model.n;
  const auto& lp = model.lp;
  auto var_name = [n](int c) {
    std::ostringstream os;
    if (c < n * n * n) os << 'x' << c / (n * n) + 1 << '_' << (c / n) % n + 1 << '_' << c % n + 1;
    else os << 'y' << c - n * n * n + 1;
    return os.str();
  };
  std::vector<std::vector<lp::Entry>> rows(lp.num_rows());
  for (int c = 0; c < lp.num_columns(); ++c)
    for (const auto& [r, v] : lp.column(c)) rows[r].emplace_back(c, v);

  std::ostringstream os;
  os << "minimize\n obj:";
  for (int c = 0; c < lp.num_columns(); ++c)
    if (lp.cost(c) != 0.0) os << " + " << lp.cost(c) << ' ' << var_name(c);
  os << "\nsubject to\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    os << " r" << r + 1 << ':';
    for (const auto& [c, v] : rows[r]) os << (v < 0 ? " - " : " + ") << std::abs(v) << ' ' << var_name(c);
    switch (lp.sense(r)) {
      case lp::RowSense::kLessEqual: os << " <= "; break;
      case lp::RowSense::kGreaterEqual: os << " >= "; break;
      case lp::RowSense::kEqual: os << " = "; break;
    }
    os << lp.rhs(r) << '\n';
  }
  os << "bounds\n";
  for (int c = 0; c < lp.num_columns(); ++c)
    os << ' ' << lp.lower(c) << " <= " << var_name(c) << " <= " << lp.upper(c) << '\n';
  os << "end\n";
  return os.str();
}

}  // namespace domp
