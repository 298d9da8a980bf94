#include "domp/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace domp::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "Optimal";
    case Status::kInfeasible: return "Infeasible";
    case Status::kUnbounded: return "Unbounded";
    case Status::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

int LinearProgram::add_row(RowSense sense, double rhs, std::span<const Entry> column_entries) {
  const int row = num_rows();
  for (const auto& [col, coef] : column_entries) {
    if (col < 0 || col >= num_columns()) throw std::out_of_range("add_row: column index");
    if (coef != 0.0) columns_[col].emplace_back(row, coef);
  }
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return row;
}

int LinearProgram::add_column(double cost, std::span<const Entry> row_entries, double lower,
                              double upper) {
  if (lower > upper) throw std::invalid_argument("add_column: lower > upper");
  std::vector<Entry> entries;
  for (const auto& [row, coef] : row_entries) {
    if (row < 0 || row >= num_rows()) throw std::out_of_range("add_column: row index");
    if (coef != 0.0) entries.emplace_back(row, coef);
  }
  std::sort(entries.begin(), entries.end());
  for (std::size_t t = 1; t < entries.size(); ++t)
    if (entries[t].first == entries[t - 1].first)
      throw std::invalid_argument("add_column: duplicate row index");
  costs_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  columns_.push_back(std::move(entries));
  return num_columns() - 1;
}

void LinearProgram::set_column_bounds(int column, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("set_column_bounds: lower > upper");
  lower_.at(column) = lower;
  upper_.at(column) = upper;
}

void LinearProgram::set_cost(int column, double cost) { costs_.at(column) = cost; }

void LinearProgram::remove_rows(const std::vector<bool>& remove) {
  if (static_cast<int>(remove.size()) != num_rows()) throw std::invalid_argument("remove_rows: size");
  std::vector<int> map(num_rows(), -1);
  int next = 0;
  for (int r = 0; r < num_rows(); ++r) {
    if (remove[r]) continue;
    map[r] = next;
    senses_[next] = senses_[r];
    rhs_[next] = rhs_[r];
    ++next;
  }
  senses_.resize(next);
  rhs_.resize(next);
  for (auto& col : columns_) {
    std::size_t w = 0;
    for (const auto& [r, a] : col)
      if (map[r] >= 0) col[w++] = {map[r], a};
    col.resize(w);
  }
}

std::vector<double> LinearProgram::activities(std::span<const double> x) const {
  std::vector<double> act(num_rows(), 0.0);
  for (int j = 0; j < num_columns(); ++j)
    if (x[j] != 0.0)
      for (const auto& [r, a] : columns_[j]) act[r] += a * x[j];
  return act;
}

struct FactorCache::State {
  std::vector<int> head;  // structural j as j, logical r as -(r + 1)
  Eigen::MatrixXd binv;
  int rows = 0;
  int columns = 0;
  std::int64_t since_refactor = 0;
};

FactorCache::FactorCache() = default;
FactorCache::~FactorCache() = default;
FactorCache::FactorCache(FactorCache&&) noexcept = default;
FactorCache& FactorCache::operator=(FactorCache&&) noexcept = default;
void FactorCache::clear() { state.reset(); }

namespace {

// Bounded primal simplex over [A -I] v = 0, v = (x, s), where s_r is the
// activity of row r and its bounds encode the row sense.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Options& opts, FactorCache* cache)
      : lp_(lp), opts_(opts), cache_(cache), n_(lp.num_columns()), m_(lp.num_rows()), total_(n_ + m_) {
    lb_.resize(total_);
    ub_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      lb_[j] = lp.lower(j);
      ub_[j] = lp.upper(j);
    }
    for (int r = 0; r < m_; ++r) {
      const double b = lp.rhs(r);
      switch (lp.sense(r)) {
        case RowSense::kGreaterEqual: lb_[n_ + r] = b; ub_[n_ + r] = kInf; break;
        case RowSense::kLessEqual: lb_[n_ + r] = -kInf; ub_[n_ + r] = b; break;
        case RowSense::kEqual: lb_[n_ + r] = b; ub_[n_ + r] = b; break;
      }
    }
    x_.assign(total_, 0.0);
    status_.assign(total_, VarStatus::kAtLower);
    true_lb_ = lb_;
    true_ub_ = ub_;
  }

  Outcome run(const Basis* warm) {
    const bool warm_loaded = warm && load_basis(*warm);
    if (!warm_loaded) cold_basis();
    reset_weights();
    d_.assign(total_, 0.0);
    Outcome out;
    std::int64_t since_refactor = since_refactor_;
    std::int64_t next_check = since_refactor + opts_.refactor_interval;
    if (warm_loaded && opts_.dual_simplex) dual_phase(since_refactor, next_check);
    int degenerate = 0;
    bool bland = false;
    bool have_d = false;  // d_ and y hold phase-2 values, updated per pivot
    Eigen::VectorXd y(m_), alpha(m_), cb(m_), rho(m_);

    for (;;) {
      if (since_refactor >= next_check) {
        // Refresh from the updated inverse; refactor when it has drifted.
        compute_basics();
        if (since_refactor >= 10 * opts_.refactor_interval || residual() > 1e-10) {
          if (!refactor()) cold_basis();
          since_refactor = 0;
        }
        next_check = since_refactor + opts_.refactor_interval;
        have_d = false;
      }
      const bool phase1 = basic_costs(cb);
      bool fresh = false;
      if (phase1 || !have_d) {
        y.noalias() = binv_.transpose() * cb;
        price_all(y, phase1);
        have_d = !phase1;
        fresh = true;
      }

      int q = choose_entering(bland);
      if (q < 0 && !fresh) {
        y.noalias() = binv_.transpose() * cb;
        price_all(y, phase1);
        q = choose_entering(bland);
      }
      if (q < 0 && perturbed_) {
        restore_bounds();
        degenerate = 0;
        continue;
      }
      if (q < 0) {
        if (phase1) {
          out.status = Status::kInfeasible;
          out.farkas.assign(y.data(), y.data() + m_);
        } else {
          out.status = Status::kOptimal;
          out.duals.assign(y.data(), y.data() + m_);
        }
        break;
      }
      if (iterations_ >= opts_.iteration_limit) {
        out.status = Status::kIterationLimit;
        break;
      }
      const double dir = d_[q] < 0 ? 1.0 : -1.0;
      column_ftran(q, alpha);

      int leave = -1;
      double step = kInf;
      bool leave_to_upper = false;
      ratio_test(alpha, dir, bland, leave, step, leave_to_upper);
      const double span = ub_[q] - lb_[q];
      bool flip = false;
      if (span < step) {
        step = span;
        flip = true;
      }
      if (!std::isfinite(step) && perturbed_) {
        restore_bounds();
        degenerate = 0;
        continue;
      }
      if (!std::isfinite(step)) {
        out.status = Status::kUnbounded;
        break;
      }
      ++iterations_;

      x_[q] += dir * step;
      for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * step * alpha[r];
      if (flip) {
        status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[q] = dir > 0 ? ub_[q] : lb_[q];
      } else {
        const int out_var = head_[leave];
        status_[out_var] = leave_to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[out_var] = leave_to_upper ? ub_[out_var] : lb_[out_var];
        rho = binv_.row(leave).transpose();
        row_update(q, leave, alpha, rho, !bland, have_d);
        if (have_d) y += (d_[q] / alpha[leave]) * rho;
        d_[q] = 0.0;
        status_[q] = VarStatus::kBasic;
        head_[leave] = q;
        pivot(leave, alpha);
        ++since_refactor;
      }

      if (step <= 1e-12) {
        if (++degenerate >= opts_.degenerate_streak) {
          if (!perturbation_used_ && opts_.perturbation > 0) {
            perturb_bounds();
            degenerate = 0;
          } else {
            bland = true;
          }
        }
      } else {
        degenerate = 0;
        bland = false;
      }
    }

    // Final values: recompute basics and refactor only if B^-1 has drifted.
    bool clean = true;
    if (since_refactor > 0) {
      compute_basics();
      if (residual() > 1e-9) {
        clean = refactor();
        since_refactor = 0;
      }
    }
    if (clean) {
      if (out.status == Status::kOptimal || out.status == Status::kInfeasible) {
        const bool phase1 = basic_costs(cb);
        y.noalias() = binv_.transpose() * cb;
        if (out.status == Status::kOptimal && !phase1)
          out.duals.assign(y.data(), y.data() + m_);
        else if (out.status == Status::kInfeasible && phase1)
          out.farkas.assign(y.data(), y.data() + m_);
      }
    }
    out.iterations = iterations_;
    out.primal.assign(x_.begin(), x_.begin() + n_);
    out.activity.assign(x_.begin() + n_, x_.end());
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += lp_.cost(j) * x_[j];
    out.basis.columns.assign(status_.begin(), status_.begin() + n_);
    out.basis.rows.assign(status_.begin() + n_, status_.end());
    if (cache_) save_cache(clean ? since_refactor : 10 * opts_.refactor_interval);
    return out;
  }

 private:
  // Bounded dual simplex from a warm basis that is primal infeasible.
  // Nonbasics with the wrong reduced-cost sign are held at their bound
  // meanwhile and released for the primal loop afterwards. Leaving row by
  // dual steepest edge, entering by a Harris ratio test.
  void dual_phase(std::int64_t& since_refactor, std::int64_t& next_check) {
    Eigen::VectorXd cb(m_), y(m_), alpha(m_), rho(m_);
    for (int r = 0; r < m_; ++r) cb[r] = head_[r] < n_ ? lp_.cost(head_[r]) : 0.0;
    y.noalias() = binv_.transpose() * cb;
    price_all(y, false);
    if (!primal_infeasible()) return;

    std::vector<std::pair<int, double>> held;  // (variable, released bound)
    for (int v = 0; v < total_; ++v) {
      const VarStatus st = status_[v];
      if (st == VarStatus::kBasic || lb_[v] == ub_[v]) continue;
      const bool wrong = (st == VarStatus::kAtLower && d_[v] < -opts_.optimality_tol) ||
                         (st == VarStatus::kAtUpper && d_[v] > opts_.optimality_tol);
      if (!wrong) continue;
      held.emplace_back(v, st == VarStatus::kAtLower ? ub_[v] : lb_[v]);
      if (st == VarStatus::kAtLower) ub_[v] = lb_[v];
      else lb_[v] = ub_[v];
    }

    std::vector<double> arow(total_, 0.0);
    std::vector<int> touched;
    const std::int64_t cap = iterations_ + 5 * static_cast<std::int64_t>(m_ + n_);
    while (iterations_ < std::min(cap, opts_.iteration_limit)) {
      if (since_refactor >= next_check) {
        compute_basics();
        if (since_refactor >= 10 * opts_.refactor_interval || residual() > 1e-10) {
          if (!refactor()) break;
          since_refactor = 0;
        }
        next_check = since_refactor + opts_.refactor_interval;
        for (int r = 0; r < m_; ++r) cb[r] = head_[r] < n_ ? lp_.cost(head_[r]) : 0.0;
        y.noalias() = binv_.transpose() * cb;
        price_all(y, false);
      }

      // Leaving row.
      const Eigen::VectorXd norms = binv_.rowwise().squaredNorm();
      int r = -1;
      double best = 0.0, target = 0.0;
      for (int k = 0; k < m_; ++k) {
        const int v = head_[k];
        double infeas = 0.0, bound = 0.0;
        if (x_[v] < lb_[v] - opts_.feasibility_tol) {
          infeas = lb_[v] - x_[v];
          bound = lb_[v];
        } else if (x_[v] > ub_[v] + opts_.feasibility_tol) {
          infeas = x_[v] - ub_[v];
          bound = ub_[v];
        } else {
          continue;
        }
        const double score = infeas * infeas / std::max(norms[k], 1e-12);
        if (score > best) {
          best = score;
          r = k;
          target = bound;
        }
      }
      if (r < 0) break;  // primal feasible
      const int p = head_[r];
      const double s = x_[p] < target ? 1.0 : -1.0;  // +1: x_p must rise

      // Pivot row and Harris ratio test over eligible nonbasics.
      rho = binv_.row(r).transpose();
      for (int v : touched) arow[v] = 0.0;
      touched.clear();
      double window = kInf;
      for (int v = 0; v < total_; ++v) {
        if (status_[v] == VarStatus::kBasic || lb_[v] == ub_[v]) continue;
        double a;
        if (v < n_) {
          a = 0.0;
          for (const auto& [row, coef] : lp_.column(v)) a += rho[row] * coef;
        } else {
          a = -rho[v - n_];
        }
        if (std::abs(a) <= opts_.pivot_tol) continue;
        arow[v] = a;
        touched.push_back(v);
        const bool eligible = status_[v] == VarStatus::kAtLower ? s * a < 0 : s * a > 0;
        if (!eligible) continue;
        const double dv = status_[v] == VarStatus::kAtLower ? std::max(0.0, d_[v]) : std::max(0.0, -d_[v]);
        window = std::min(window, (dv + opts_.optimality_tol) / std::abs(a));
      }
      int q = -1;
      double qa = 0.0;
      for (int v : touched) {
        const double a = arow[v];
        const bool eligible = status_[v] == VarStatus::kAtLower ? s * a < 0 : s * a > 0;
        if (!eligible) continue;
        const double dv = status_[v] == VarStatus::kAtLower ? std::max(0.0, d_[v]) : std::max(0.0, -d_[v]);
        if (dv / std::abs(a) > window) continue;
        if (std::abs(a) > qa) {
          qa = std::abs(a);
          q = v;
        }
      }
      if (q < 0) break;  // dual unbounded: the primal loop proves infeasibility

      const double theta = d_[q] / arow[q];
      for (int v : touched) d_[v] -= theta * arow[v];
      column_ftran(q, alpha);
      const double delta = (x_[p] - target) / alpha[r];
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= delta * alpha[k];
      x_[q] += delta;
      x_[p] = target;
      status_[p] = target == lb_[p] ? VarStatus::kAtLower : VarStatus::kAtUpper;
      d_[p] = -theta;
      d_[q] = 0.0;
      status_[q] = VarStatus::kBasic;
      head_[r] = q;
      pivot(r, alpha);
      ++since_refactor;
      ++iterations_;
    }

    for (const auto& [v, bound] : held) {
      const bool below = lb_[v] > bound;  // held at its upper bound
      (below ? lb_[v] : ub_[v]) = bound;
      if (status_[v] != VarStatus::kBasic) {
        status_[v] = resting_status(v, below ? VarStatus::kAtUpper : VarStatus::kAtLower);
        place_nonbasic(v);
      }
    }
    compute_basics();
  }

  bool primal_infeasible() const {
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      if (x_[v] < lb_[v] - opts_.feasibility_tol || x_[v] > ub_[v] + opts_.feasibility_tol) return true;
    }
    return false;
  }

  // Nonbasic status that is valid for variable v.
  VarStatus resting_status(int v, VarStatus wanted) const {
    if (wanted == VarStatus::kAtUpper && std::isfinite(ub_[v])) return VarStatus::kAtUpper;
    if (std::isfinite(lb_[v])) return VarStatus::kAtLower;
    return VarStatus::kAtUpper;
  }

  void perturb_bounds() {
    perturbation_used_ = true;
    perturbed_ = true;
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    auto next = [&state] {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return static_cast<double>(state >> 11) * 0x1.0p-53;
    };
    const double p = opts_.perturbation;
    for (int v = 0; v < total_; ++v) {
      if (lb_[v] == ub_[v]) continue;
      if (std::isfinite(lb_[v])) lb_[v] -= p * (1.0 + next());
      if (std::isfinite(ub_[v])) ub_[v] += p * (1.0 + next());
      if (status_[v] != VarStatus::kBasic) place_nonbasic(v);
    }
    compute_basics();
  }

  void restore_bounds() {
    perturbed_ = false;
    lb_ = true_lb_;
    ub_ = true_ub_;
    for (int v = 0; v < total_; ++v)
      if (status_[v] != VarStatus::kBasic) place_nonbasic(v);
    compute_basics();
  }

  void place_nonbasic(int v) {
    x_[v] = status_[v] == VarStatus::kAtUpper ? ub_[v] : lb_[v];
    if (!std::isfinite(x_[v])) x_[v] = 0.0;
  }

  void cold_basis() {
    head_.resize(m_);
    for (int j = 0; j < n_; ++j) {
      status_[j] = resting_status(j, VarStatus::kAtLower);
      place_nonbasic(j);
    }
    for (int r = 0; r < m_; ++r) {
      status_[n_ + r] = VarStatus::kBasic;
      head_[r] = n_ + r;
    }
    binv_ = -Eigen::MatrixXd::Identity(m_, m_);
    compute_basics();
  }

  bool load_basis(const Basis& warm) {
    if (static_cast<int>(warm.columns.size()) > n_ || static_cast<int>(warm.rows.size()) > m_)
      return false;
    head_.clear();
    for (int v = 0; v < total_; ++v) {
      VarStatus s;
      if (v < n_)
        s = v < static_cast<int>(warm.columns.size()) ? warm.columns[v] : VarStatus::kAtLower;
      else
        s = v - n_ < static_cast<int>(warm.rows.size()) ? warm.rows[v - n_] : VarStatus::kBasic;
      if (s == VarStatus::kBasic) {
        status_[v] = s;
        head_.push_back(v);
      } else {
        status_[v] = resting_status(v, s);
        place_nonbasic(v);
      }
    }
    if (static_cast<int>(head_.size()) != m_ && !fit_basis()) return false;
    if (restore_cache()) return true;
    if (!refactor()) return false;
    return true;
  }

  // Keeps a maximal independent subset of the basics and covers the
  // remaining rows with their logicals.
  bool fit_basis() {
    const int k = static_cast<int>(head_.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, k);
    for (int t = 0; t < k; ++t) {
      const int v = head_[t];
      if (v < n_) {
        for (const auto& [row, a] : lp_.column(v)) b(row, t) = a;
      } else {
        b(v - n_, t) = -1.0;
      }
    }
    std::vector<int> kept;
    std::vector<bool> covered(m_, false);
    if (k > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
      lu.setThreshold(1e-10);
      const int rank = static_cast<int>(lu.rank());
      const auto& p = lu.permutationP().indices();
      const auto& q = lu.permutationQ().indices();
      for (int t = 0; t < k; ++t) {
        const int v = head_[q[t]];
        if (t < rank) {
          kept.push_back(v);
          continue;
        }
        status_[v] = resting_status(v, std::abs(x_[v] - ub_[v]) < std::abs(x_[v] - lb_[v])
                                           ? VarStatus::kAtUpper
                                           : VarStatus::kAtLower);
        place_nonbasic(v);
      }
      for (int i = 0; i < m_; ++i) covered[i] = p[i] < rank;
    }
    for (int i = 0; i < m_; ++i) {
      if (covered[i]) continue;
      if (status_[n_ + i] == VarStatus::kBasic) return false;
      status_[n_ + i] = VarStatus::kBasic;
      kept.push_back(n_ + i);
    }
    if (static_cast<int>(kept.size()) != m_) return false;
    std::sort(kept.begin(), kept.end());
    head_ = std::move(kept);
    return true;
  }

  int canonical(int v) const { return v < n_ ? v : -(v - n_ + 1); }

  // Reuses the cached inverse when the basic set matches; rows appended
  // since then extend it as [[B^-1, 0], [C B^-1, -I]].
  bool restore_cache() {
    if (!cache_ || !cache_->state) return false;
    auto& st = *cache_->state;
    const int m0 = st.rows;
    if (m0 > m_ || st.columns > n_ || static_cast<int>(st.head.size()) != m0) return false;
    std::vector<int> want, have(st.head);
    want.reserve(m_);
    for (int v : head_) want.push_back(canonical(v));
    for (int r = m0; r < m_; ++r) have.push_back(-(r + 1));
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    if (want != have) return false;

    for (int r = 0; r < m0; ++r) head_[r] = st.head[r] >= 0 ? st.head[r] : n_ - st.head[r] - 1;
    for (int r = m0; r < m_; ++r) head_[r] = n_ + r;
    if (m0 == m_) {
      binv_ = std::move(st.binv);
    } else {
      const int k = m_ - m0;
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, m0);
      for (int r = 0; r < m0; ++r) {
        const int v = head_[r];
        if (v >= n_) continue;
        for (const auto& [row, a] : lp_.column(v))
          if (row >= m0) c(row - m0, r) = a;
      }
      binv_.resize(m_, m_);
      binv_.topLeftCorner(m0, m0) = st.binv;
      binv_.topRightCorner(m0, k).setZero();
      binv_.bottomLeftCorner(k, m0).noalias() = c * st.binv;
      binv_.bottomRightCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
    }
    since_refactor_ = st.since_refactor;
    cache_->state.reset();
    compute_basics();
    if (residual() > 1e-9) return refactor();
    return true;
  }

  void save_cache(std::int64_t since_refactor) {
    auto st = std::make_unique<FactorCache::State>();
    st->head.reserve(m_);
    for (int v : head_) st->head.push_back(canonical(v));
    st->binv = std::move(binv_);
    st->rows = m_;
    st->columns = n_;
    st->since_refactor = since_refactor;
    cache_->state = std::move(st);
  }

  // Largest |a_r x - s_r| relative to the magnitudes involved.
  double residual() const {
    std::vector<double> act(m_, 0.0), scale(m_, 1.0);
    for (int j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (const auto& [r, a] : lp_.column(j)) {
        act[r] += a * x_[j];
        scale[r] = std::max(scale[r], std::abs(a * x_[j]));
      }
    }
    double worst = 0.0;
    for (int r = 0; r < m_; ++r)
      worst = std::max(worst, std::abs(act[r] - x_[n_ + r]) / std::max(scale[r], std::abs(x_[n_ + r])));
    return worst;
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      if (v < n_) {
        for (const auto& [row, a] : lp_.column(v)) b(row, r) = a;
      } else {
        b(v - n_, r) = -1.0;
      }
    }
    return b;
  }

  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
      const Eigen::MatrixXd b = basis_matrix();
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
      if (lu.rcond() > 1e-13) {
        binv_ = lu.inverse();
        compute_basics();
        return true;
      }
      if (attempt == 0 && !repair_basis(b)) break;
    }
    return false;
  }

  // Swaps the dependent basic columns for logicals of uncovered rows.
  bool repair_basis(const Eigen::MatrixXd& b) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    lu.setThreshold(1e-10);
    const int rank = static_cast<int>(lu.rank());
    if (rank == m_) return false;
    const auto& p = lu.permutationP().indices();
    const auto& q = lu.permutationQ().indices();
    std::vector<int> free_rows;
    for (int i = 0; i < m_; ++i)
      if (p[i] >= rank && status_[n_ + i] != VarStatus::kBasic) free_rows.push_back(i);
    std::size_t next = 0;
    for (int t = rank; t < m_; ++t) {
      if (next == free_rows.size()) return false;
      const int pos = q[t];
      const int out = head_[pos];
      const int in = n_ + free_rows[next++];
      status_[out] = std::abs(x_[out] - ub_[out]) < std::abs(x_[out] - lb_[out]) ? VarStatus::kAtUpper
                                                                                 : VarStatus::kAtLower;
      status_[out] = resting_status(out, status_[out]);
      place_nonbasic(out);
      status_[in] = VarStatus::kBasic;
      head_[pos] = in;
    }
    return true;
  }

  // x_B = B^{-1} (-N x_N)
  void compute_basics() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int v = 0; v < total_; ++v) {
      if (status_[v] == VarStatus::kBasic || x_[v] == 0.0) continue;
      if (v < n_) {
        for (const auto& [row, a] : lp_.column(v)) rhs[row] -= a * x_[v];
      } else {
        rhs[v - n_] += x_[v];
      }
    }
    Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_[head_[r]] = xb[r];
  }

  // Fills basic costs; returns true when some basic is infeasible (phase 1).
  bool basic_costs(Eigen::VectorXd& cb) const {
    bool infeasible = false;
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      if (x_[v] < lb_[v] - opts_.feasibility_tol) {
        cb[r] = -1.0;
        infeasible = true;
      } else if (x_[v] > ub_[v] + opts_.feasibility_tol) {
        cb[r] = 1.0;
        infeasible = true;
      } else {
        cb[r] = 0.0;
      }
    }
    if (!infeasible)
      for (int r = 0; r < m_; ++r) cb[r] = head_[r] < n_ ? lp_.cost(head_[r]) : 0.0;
    return infeasible;
  }

  double reduced_cost(int v, const Eigen::VectorXd& y, bool phase1) const {
    if (v >= n_) return y[v - n_];
    double d = phase1 ? 0.0 : lp_.cost(v);
    for (const auto& [row, a] : lp_.column(v)) d -= y[row] * a;
    return d;
  }

  void price_all(const Eigen::VectorXd& y, bool phase1) {
    for (int v = 0; v < total_; ++v)
      d_[v] = status_[v] == VarStatus::kBasic || lb_[v] == ub_[v] ? 0.0 : reduced_cost(v, y, phase1);
  }

  // Devex pricing: largest d^2 / w among improving candidates.
  int choose_entering(bool bland) const {
    int best = -1;
    double best_score = 0.0;
    for (int v = 0; v < total_; ++v) {
      const VarStatus s = status_[v];
      if (s == VarStatus::kBasic || lb_[v] == ub_[v]) continue;
      const double d = d_[v];
      if (!((s == VarStatus::kAtLower && d < -opts_.optimality_tol) ||
            (s == VarStatus::kAtUpper && d > opts_.optimality_tol)))
        continue;
      if (bland) return v;
      const double score = d * d / weight_[v];
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    return best;
  }

  void reset_weights() { weight_.assign(total_, 1.0); }

  // Pass over the pivot row alpha_r = rho' A_N before the basis change:
  // reference-framework weights and, with `update_d`, the reduced costs.
  void row_update(int q, int r, const Eigen::VectorXd& alpha, const Eigen::VectorXd& rho,
                  bool weights, bool update_d) {
    if (!weights && !update_d) return;
    const double piv = alpha[r];
    const double wq = weight_[q];
    const double theta = d_[q] / piv;
    double largest = 0.0;
    for (int v = 0; v < total_; ++v) {
      if (status_[v] == VarStatus::kBasic || v == q || lb_[v] == ub_[v]) continue;
      double arv;
      if (v < n_) {
        arv = 0.0;
        for (const auto& [row, a] : lp_.column(v)) arv += rho[row] * a;
      } else {
        arv = -rho[v - n_];
      }
      if (arv == 0.0) continue;
      if (update_d) d_[v] -= theta * arv;
      if (weights) {
        const double ratio = arv / piv;
        weight_[v] = std::max(weight_[v], ratio * ratio * wq);
        largest = std::max(largest, weight_[v]);
      }
    }
    if (weights) {
      weight_[head_[r]] = std::max(wq / (piv * piv), 1.0);
      if (largest > 1e8) reset_weights();
    }
  }

  void column_ftran(int v, Eigen::VectorXd& alpha) const {
    if (v >= n_) {
      alpha = -binv_.col(v - n_);
      return;
    }
    alpha.setZero();
    for (const auto& [row, a] : lp_.column(v)) alpha += a * binv_.col(row);
  }

  void ratio_test(const Eigen::VectorXd& alpha, double dir, bool bland, int& leave, double& step,
                  bool& to_upper) const {
    struct Candidate {
      int pos;
      double t;
      bool upper;
    };
    std::vector<Candidate> cands;
    const double tol = opts_.feasibility_tol;
    for (int r = 0; r < m_; ++r) {
      const double a = alpha[r];
      if (std::abs(a) <= opts_.pivot_tol) continue;
      const int v = head_[r];
      const double rate = -dir * a;  // dx_v / dt
      const double xv = x_[v];
      if (rate < 0) {
        if (xv > ub_[v] + tol) {
          cands.push_back({r, (xv - ub_[v]) / -rate, true});
        } else if (xv >= lb_[v] - tol && std::isfinite(lb_[v])) {
          cands.push_back({r, std::max(0.0, xv - lb_[v]) / -rate, false});
        }
      } else {
        if (xv < lb_[v] - tol) {
          cands.push_back({r, (lb_[v] - xv) / rate, false});
        } else if (xv <= ub_[v] + tol && std::isfinite(ub_[v])) {
          cands.push_back({r, std::max(0.0, ub_[v] - xv) / rate, true});
        }
      }
    }
    if (cands.empty()) return;
    double tmin = kInf;
    for (const auto& c : cands) tmin = std::min(tmin, c.t);
    double slack = 1e-12 * std::max(1.0, tmin);
    // Harris window: any candidate that the step can reach while keeping
    // every basic within tol of its bound.
    if (!bland && opts_.tie_rule == TieRule::kLargestPivot) {
      double window = kInf;
      for (const auto& c : cands) window = std::min(window, c.t + 0.5 * tol / std::abs(alpha[c.pos]));
      slack = std::max(slack, window - tmin);
    }
    const Candidate* pick = nullptr;
    for (const auto& c : cands) {
      if (c.t > tmin + slack) continue;
      if (!pick) {
        pick = &c;
        continue;
      }
      const int vc = head_[c.pos], vp = head_[pick->pos];
      bool better = false;
      if (bland) {
        better = vc < vp;
      } else {
        switch (opts_.tie_rule) {
          case TieRule::kLargestPivot: {
            const double ac = std::abs(alpha[c.pos]), ap = std::abs(alpha[pick->pos]);
            better = ac > ap * (1 + 1e-12) || (ac >= ap * (1 - 1e-12) && vc < vp);
            break;
          }
          case TieRule::kLowestIndex: better = vc < vp; break;
          case TieRule::kHighestIndex: better = vc > vp; break;
          case TieRule::kLexicographic:
            better = lex_less(c.pos, pick->pos, alpha, dir);
            break;
        }
      }
      if (better) pick = &c;
    }
    leave = pick->pos;
    step = pick->t;
    to_upper = pick->upper;
  }

  // Compares rows of B^-1 scaled by the signed pivot.
  bool lex_less(int a, int b, const Eigen::VectorXd& alpha, double dir) const {
    const double sa = dir * alpha[a], sb = dir * alpha[b];
    for (int c = 0; c < m_; ++c) {
      const double va = binv_(a, c) / sa, vb = binv_(b, c) / sb;
      if (va < vb - 1e-12) return true;
      if (va > vb + 1e-12) return false;
    }
    return head_[a] < head_[b];
  }

  void pivot(int r, const Eigen::VectorXd& alpha) {
    const Eigen::RowVectorXd row = binv_.row(r) / alpha[r];
    Eigen::VectorXd a = alpha;
    a[r] = 0.0;
    binv_.noalias() -= a * row;
    binv_.row(r) = row;
  }

  const LinearProgram& lp_;
  const Options& opts_;
  FactorCache* cache_;
  std::int64_t since_refactor_ = 0;
  int n_, m_, total_;
  std::vector<double> lb_, ub_, x_;
  std::vector<double> true_lb_, true_ub_;
  std::vector<double> weight_;
  std::vector<double> d_;
  bool perturbed_ = false;
  bool perturbation_used_ = false;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  Eigen::MatrixXd binv_;
  std::int64_t iterations_ = 0;
};

}  // namespace

Outcome solve(const LinearProgram& lp, const Basis* warm, const Options& opts, FactorCache* cache) {
  Simplex simplex(lp, opts, cache);
  return simplex.run(warm);
}

double farkas_margin(const LinearProgram& lp, std::span<const double> f, double sign_tol) {
  const int m = lp.num_rows();
  if (static_cast<int>(f.size()) != m) return -kInf;
  double fb = 0.0;
  for (int r = 0; r < m; ++r) {
    if (lp.sense(r) == RowSense::kGreaterEqual && f[r] < -sign_tol) return -kInf;
    if (lp.sense(r) == RowSense::kLessEqual && f[r] > sign_tol) return -kInf;
    fb += f[r] * lp.rhs(r);
  }
  double max_gx = 0.0;
  for (int j = 0; j < lp.num_columns(); ++j) {
    double g = 0.0;
    for (const auto& [r, a] : lp.column(j)) g += f[r] * a;
    if (std::abs(g) <= 1e-12) continue;
    const double bound = g > 0 ? lp.upper(j) : lp.lower(j);
    if (!std::isfinite(bound)) return -kInf;
    max_gx += g * bound;
  }
  return fb - max_gx;
}

bool verify_farkas(const LinearProgram& lp, std::span<const double> f, double tol) {
  return farkas_margin(lp, f) > tol;
}

std::string dump(const LinearProgram& lp, std::span<const std::string> row_names,
                 std::span<const std::string> column_names) {
  std::vector<std::vector<Entry>> rows(lp.num_rows());
  for (int j = 0; j < lp.num_columns(); ++j)
    for (const auto& [r, a] : lp.column(j)) rows[r].emplace_back(j, a);
  auto col_name = [&](int j) {
    return j < static_cast<int>(column_names.size()) ? column_names[j] : "x" + std::to_string(j);
  };
  std::ostringstream os;
  os << "min";
  for (int j = 0; j < lp.num_columns(); ++j) os << ' ' << lp.cost(j) << '*' << col_name(j);
  os << '\n';
  for (int r = 0; r < lp.num_rows(); ++r) {
    os << (r < static_cast<int>(row_names.size()) ? row_names[r] : "r" + std::to_string(r)) << ':';
    for (const auto& [j, a] : rows[r]) os << ' ' << a << '*' << col_name(j);
    switch (lp.sense(r)) {
      case RowSense::kGreaterEqual: os << " >= "; break;
      case RowSense::kLessEqual: os << " <= "; break;
      case RowSense::kEqual: os << " = "; break;
    }
    os << lp.rhs(r) << '\n';
  }
  for (int j = 0; j < lp.num_columns(); ++j)
    if (lp.lower(j) != 0.0 || std::isfinite(lp.upper(j)))
      os << "bounds " << col_name(j) << ": [" << lp.lower(j) << ", " << lp.upper(j) << "]\n";
  return os.str();
}

}  // namespace domp::lp
