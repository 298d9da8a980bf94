#include "domp/master.hpp"

#include <algorithm>
#include <stdexcept>

namespace domp {

DualVector DualVector::zero(int n) {
  DualVector d;
  d.alpha.assign(n, 0.0);
  d.beta.assign(n, 0.0);
  d.gamma.assign(n, 0.0);
  d.epsilon.assign(n, 0.0);
  return d;
}

double DualVector::zeta_of(const CutKey& key) const {
  for (std::size_t c = 0; c < cuts.size(); ++c)
    if (cuts[c] == key) return zeta[c];
  return 0.0;
}

double DualVector::objective(int p) const {
  const int m = n();
  double z = 0.0;
  for (int i = 0; i < m; ++i) z += alpha[i] + beta[i] - gamma[i];
  z -= p * delta;
  double eps = 0.0;
  for (int k = 1; k < m; ++k) eps += epsilon[k];
  z -= static_cast<double>(m) * m * eps;
  for (double v : zeta) z -= v;
  return z;
}

DualVector DualVector::combine(const DualVector& a, const DualVector& b, double w) {
  DualVector out = a;
  const int m = a.n();
  for (int i = 0; i < m; ++i) {
    out.alpha[i] = w * a.alpha[i] + (1 - w) * b.alpha[i];
    out.beta[i] = w * a.beta[i] + (1 - w) * b.beta[i];
    out.gamma[i] = w * a.gamma[i] + (1 - w) * b.gamma[i];
    out.epsilon[i] = w * a.epsilon[i] + (1 - w) * b.epsilon[i];
  }
  out.delta = w * a.delta + (1 - w) * b.delta;
  for (std::size_t c = 0; c < a.cuts.size(); ++c) {
    const double other = c < b.cuts.size() && b.cuts[c] == a.cuts[c] ? b.zeta[c] : b.zeta_of(a.cuts[c]);
    out.zeta[c] = w * a.zeta[c] + (1 - w) * other;
  }
  return out;
}

RestrictedMaster::RestrictedMaster(const Instance& inst, RowConvention convention)
    : inst_(&inst), ranks_(inst), convention_(convention), n_(inst.n()) {
  const auto cover =
      convention == RowConvention::kCovering ? lp::RowSense::kGreaterEqual : lp::RowSense::kEqual;
  for (int i = 0; i < n_; ++i) lp_.add_row(cover, 1.0);
  for (int k = 0; k < n_; ++k) lp_.add_row(cover, 1.0);
  for (int j = 0; j < n_; ++j) lp_.add_row(lp::RowSense::kLessEqual, 1.0);
  lp_.add_row(lp::RowSense::kLessEqual, inst.p());
  const double n2 = static_cast<double>(n_) * n_;
  for (int k = 1; k < n_; ++k) lp_.add_row(lp::RowSense::kLessEqual, n2);
}

std::optional<int> RestrictedMaster::find_column(const Column& col) const {
  auto it = index_.find(col);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<int, bool> RestrictedMaster::add_column(const Column& col) {
  if (auto found = find_column(col)) {
    const int idx = *found;
    if (!retired_[idx]) return {idx, false};
    retired_[idx] = false;
    idle_[idx] = 0;
    set_column_enabled(idx, enabled_[idx]);
    return {idx, true};
  }
  const auto entries = coefficients(col);
  const int idx = lp_.add_column(static_cast<double>(col.cost), entries);
  columns_.push_back(col);
  enabled_.push_back(true);
  retired_.push_back(false);
  idle_.push_back(0);
  index_.emplace(col, idx);
  return {idx, true};
}

int RestrictedMaster::cut_coefficient(const Column& col, const CutKey& key) const {
  if (key.position < 1) return 0;
  const int ref = ranks_.rank(key.client, key.facility);
  int coef = 0;
  for (const auto& cp : col.couples) {
    const int r = ranks_.rank(cp.client, col.facility);
    if (cp.position == key.position && r <= ref) ++coef;
    if (cp.position == key.position - 1 && r >= ref) ++coef;
  }
  return coef;
}

std::vector<lp::Entry> RestrictedMaster::coefficients(const Column& col) const {
  std::vector<lp::Entry> entries;
  const int j = col.facility;
  for (const auto& cp : col.couples) {
    entries.emplace_back(client_row(cp.client), 1.0);
    entries.emplace_back(position_row(cp.position), 1.0);
  }
  entries.emplace_back(facility_row(j), 1.0);
  entries.emplace_back(cardinality_row(), 1.0);
  std::vector<double> order(n_, 0.0);
  const double n2 = static_cast<double>(n_) * n_;
  for (const auto& cp : col.couples) {
    const int r = ranks_.rank(cp.client, j);
    if (cp.position >= 1) order[cp.position] += n2 - r + 1;
    if (cp.position + 1 < n_) order[cp.position + 1] += r;
  }
  for (int k = 1; k < n_; ++k)
    if (order[k] != 0.0) entries.emplace_back(order_row(k), order[k]);
  for (int c = 0; c < num_cuts(); ++c) {
    const int coef = cut_coefficient(col, cuts_[c]);
    if (coef) entries.emplace_back(cut_row(c), coef);
  }
  return entries;
}

bool RestrictedMaster::has_cut(const CutKey& key) const {
  return std::find(cuts_.begin(), cuts_.end(), key) != cuts_.end();
}

int RestrictedMaster::add_cut(const CutKey& key) {
  if (key.position < 1 || key.position >= n_) throw std::invalid_argument("add_cut: position must be 2..n");
  if (has_cut(key)) throw std::invalid_argument("add_cut: duplicate cut");
  std::vector<lp::Entry> entries;
  for (int c = 0; c < num_columns(); ++c) {
    const int coef = cut_coefficient(columns_[c], key);
    if (coef) entries.emplace_back(c, coef);
  }
  cuts_.push_back(key);
  return lp_.add_row(lp::RowSense::kLessEqual, 1.0, entries);
}

int RestrictedMaster::purge_slack_cuts(double tol) {
  const int rows = lp_.num_rows();
  if (num_cuts() == 0 || static_cast<int>(last_.activity.size()) != rows ||
      static_cast<int>(basis_.rows.size()) != rows)
    return 0;
  std::vector<bool> remove(rows, false);
  std::vector<CutKey> kept;
  std::vector<lp::VarStatus> row_status(basis_.rows.begin(), basis_.rows.begin() + base_rows());
  for (int c = 0; c < num_cuts(); ++c) {
    const int r = cut_row(c);
    if (basis_.rows[r] == lp::VarStatus::kBasic && last_.activity[r] < 1.0 - tol) {
      remove[r] = true;
    } else {
      kept.push_back(cuts_[c]);
      row_status.push_back(basis_.rows[r]);
    }
  }
  const int removed = num_cuts() - static_cast<int>(kept.size());
  if (removed == 0) return 0;
  lp_.remove_rows(remove);
  cuts_ = std::move(kept);
  basis_.rows = std::move(row_status);
  factor_.clear();
  last_ = {};
  return removed;
}

void RestrictedMaster::set_warm_start(const WarmStart& ws) {
  for (std::size_t c = 0; c < ws.cuts.size(); ++c) {
    const std::size_t r = base_rows() + c;
    const bool tight = r < ws.basis.rows.size() && ws.basis.rows[r] != lp::VarStatus::kBasic;
    if (tight && !has_cut(ws.cuts[c])) add_cut(ws.cuts[c]);
  }
  basis_.columns = ws.basis.columns;
  basis_.rows.assign(ws.basis.rows.begin(),
                     ws.basis.rows.begin() + std::min<std::size_t>(ws.basis.rows.size(), base_rows()));
  if (ws.basis.rows.size() < static_cast<std::size_t>(base_rows())) return;
  for (const auto& key : cuts_) {
    lp::VarStatus st = lp::VarStatus::kBasic;
    for (std::size_t c = 0; c < ws.cuts.size(); ++c) {
      if (ws.cuts[c] == key) {
        if (base_rows() + c < ws.basis.rows.size()) st = ws.basis.rows[base_rows() + c];
        break;
      }
    }
    basis_.rows.push_back(st);
  }
}

void RestrictedMaster::set_column_enabled(int idx, bool enabled) {
  enabled_.at(idx) = enabled;
  lp_.set_column_bounds(idx, 0.0, enabled && !retired_[idx] ? lp::kInf : 0.0);
}

int RestrictedMaster::retire_idle_columns(int min_idle) {
  int count = 0;
  for (int c = 0; c < num_columns(); ++c) {
    if (retired_[c] || idle_[c] < min_idle) continue;
    retired_[c] = true;
    lp_.set_column_bounds(c, 0.0, 0.0);
    ++count;
  }
  return count;
}

bool RestrictedMaster::column_enabled(int idx) const { return enabled_.at(idx); }

const lp::Outcome& RestrictedMaster::solve() {
  lp::Options opts = lp_options_;
  // Infeasible masters stay infeasible across Farkas rounds; the dual phase
  // would only rediscover that.
  if (last_.status == lp::Status::kInfeasible) opts.dual_simplex = false;
  last_ = lp::solve(lp_, basis_.empty() ? nullptr : &basis_, opts, &factor_);
  basis_ = last_.basis;
  if (last_.status == lp::Status::kOptimal) {
    for (int c = 0; c < num_columns(); ++c) {
      if (last_.primal[c] > 1e-9 || basis_.columns[c] == lp::VarStatus::kBasic) idle_[c] = 0;
      else if (enabled_[c]) ++idle_[c];
    }
  }
  return last_;
}

DualVector RestrictedMaster::translate(const std::vector<double>& y) const {
  DualVector d = DualVector::zero(n_);
  for (int i = 0; i < n_; ++i) {
    d.alpha[i] = y[client_row(i)];
    d.beta[i] = y[position_row(i)];
    d.gamma[i] = -y[facility_row(i)];
  }
  d.delta = -y[cardinality_row()];
  for (int k = 1; k < n_; ++k) d.epsilon[k] = -y[order_row(k)];
  d.cuts = cuts_;
  d.zeta.resize(cuts_.size());
  for (int c = 0; c < num_cuts(); ++c) d.zeta[c] = -y[cut_row(c)];
  return d;
}

DualVector RestrictedMaster::duals() const {
  if (last_.status != lp::Status::kOptimal) throw std::logic_error("duals: last solve not optimal");
  return translate(last_.duals);
}

DualVector RestrictedMaster::farkas_duals() const {
  if (last_.status != lp::Status::kInfeasible)
    throw std::logic_error("farkas_duals: last solve not infeasible");
  return translate(last_.farkas);
}

double RestrictedMaster::farkas_reduced_cost(const Column& col, const DualVector& d) const {
  const int j = col.facility;
  double rc = d.gamma[j] + d.delta;
  const double n2 = static_cast<double>(n_) * n_;
  for (const auto& cp : col.couples) {
    const int r = ranks_.rank(cp.client, j);
    rc -= d.alpha[cp.client] + d.beta[cp.position];
    if (cp.position >= 1) rc += (n2 - r + 1) * d.epsilon[cp.position];
    if (cp.position + 1 < n_) rc += r * d.epsilon[cp.position + 1];
  }
  for (std::size_t c = 0; c < d.cuts.size(); ++c) {
    if (d.zeta[c] == 0.0) continue;
    rc += cut_coefficient(col, d.cuts[c]) * d.zeta[c];
  }
  return rc;
}

double RestrictedMaster::reduced_cost(const Column& col, const DualVector& d) const {
  return static_cast<double>(col.cost) + farkas_reduced_cost(col, d);
}

std::vector<std::string> RestrictedMaster::row_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < n_; ++i) names.push_back("client" + std::to_string(i + 1));
  for (int k = 0; k < n_; ++k) names.push_back("position" + std::to_string(k + 1));
  for (int j = 0; j < n_; ++j) names.push_back("facility" + std::to_string(j + 1));
  names.push_back("cardinality");
  for (int k = 1; k < n_; ++k) names.push_back("order" + std::to_string(k + 1));
  for (const auto& c : cuts_)
    names.push_back("cut(" + std::to_string(c.client + 1) + "," + std::to_string(c.facility + 1) +
                    "," + std::to_string(c.position + 1) + ")");
  return names;
}

std::vector<std::string> RestrictedMaster::column_names() const {
  std::vector<std::string> names;
  for (const auto& c : columns_) names.push_back("y[" + to_string(c) + "]");
  return names;
}

std::string RestrictedMaster::dump() const {
  const auto rows = row_names();
  const auto cols = column_names();
  return lp::dump(lp_, rows, cols);
}

std::pair<double, double> lp_bound_pair(double z, const std::vector<double>& minima, int p) {
  double worst = 0.0, total = 0.0;
  for (double m : minima) {
    const double clipped = std::min(0.0, m);
    worst = std::min(worst, clipped);
    total += clipped;
  }
  return {z + p * worst, z + total};
}

}  // namespace domp
