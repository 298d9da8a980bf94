#include "domp/bpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace domp {

double OriginalPoint::facility_load(int j) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) s += at(i, j, k);
  return s;
}

bool OriginalPoint::integral(double tol) const {
  for (double v : x_)
    if (v > tol && v < 1.0 - tol) return false;
  return true;
}

OriginalPoint aggregate_x(const Instance& inst, const std::vector<Column>& columns,
                          const std::vector<double>& values) {
  if (columns.size() > values.size()) throw std::invalid_argument("aggregate_x: missing column values");
  OriginalPoint x(inst.n());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const double v = values[c];
    if (v == 0.0) continue;
    for (const auto& cp : columns[c].couples) x.at(cp.client, columns[c].facility, cp.position) += v;
  }
  return x;
}

std::optional<Triplet> select_branching_variable(const Instance& inst, const OriginalPoint& x,
                                                 BranchStrategy strategy, double theta, double tol) {
  const int n = x.n();
  std::optional<Triplet> best;
  double best_score = std::numeric_limits<double>::infinity();
  // Loop order (i, j, k) with strict improvement gives lexicographic ties.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double v = x.at(i, j, k);
        if (!(v > tol && v < 1.0 - tol)) continue;
        const double c = static_cast<double>(inst.weight(k) * inst.cost(i, j));
        const double down = c / v;
        const double up = c / (1.0 - v);
        double score = 0.0;
        switch (strategy) {
          case BranchStrategy::kWeighted: score = theta * down + (1.0 - theta) * up; break;
          case BranchStrategy::kMin: score = std::min(down, up); break;
          case BranchStrategy::kMax: score = std::max(down, up); break;
        }
        if (!best || score < best_score) {
          best_score = score;
          best = Triplet{i, j, k};
        }
      }
    }
  }
  return best;
}

namespace {

// lhs(r, k) for every rank r at level k >= 1: prefix over level k plus suffix
// over level k - 1. Indexed [k * (n^2 + 1) + r].
std::vector<double> all_cut_lhs(const OriginalPoint& x, const RankMatrix& ranks) {
  const int n = x.n();
  const int n2 = n * n;
  std::vector<double> lhs(static_cast<std::size_t>(n) * (n2 + 1), 0.0);
  std::vector<double> prefix(n2 + 2), suffix(n2 + 2);
  for (int k = 1; k < n; ++k) {
    prefix[0] = 0.0;
    for (int r = 1; r <= n2; ++r) {
      const auto [i, j] = ranks.pair_at(r);
      prefix[r] = prefix[r - 1] + x.at(i, j, k);
    }
    suffix[n2 + 1] = 0.0;
    for (int r = n2; r >= 1; --r) {
      const auto [i, j] = ranks.pair_at(r);
      suffix[r] = suffix[r + 1] + x.at(i, j, k - 1);
    }
    for (int r = 1; r <= n2; ++r) lhs[static_cast<std::size_t>(k) * (n2 + 1) + r] = prefix[r] + suffix[r];
  }
  return lhs;
}

}  // namespace

double cut_lhs(const OriginalPoint& x, const RankMatrix& ranks, const CutKey& key) {
  const int n = x.n();
  if (key.position < 1 || key.position >= n) throw std::invalid_argument("cut position out of range");
  const int ref = ranks.rank(key.client, key.facility);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int r = ranks.rank(i, j);
      if (r <= ref) s += x.at(i, j, key.position);
      if (r >= ref) s += x.at(i, j, key.position - 1);
    }
  }
  return s;
}

std::vector<SeparatedCut> separate_cuts(const OriginalPoint& x, const RankMatrix& ranks, int max_cuts,
                                        double tol, const std::vector<CutKey>& existing) {
  const int n = x.n();
  const int n2 = n * n;
  const std::set<CutKey> skip(existing.begin(), existing.end());
  const auto lhs = all_cut_lhs(x, ranks);
  std::vector<SeparatedCut> found;
  for (int k = 1; k < n; ++k) {
    for (int r = 1; r <= n2; ++r) {
      const double viol = lhs[static_cast<std::size_t>(k) * (n2 + 1) + r] - 1.0;
      if (!(viol > tol)) continue;
      const auto [i, j] = ranks.pair_at(r);
      const CutKey key{i, j, k};
      if (skip.count(key)) continue;
      found.push_back({key, viol});
    }
  }
  std::sort(found.begin(), found.end(), [](const SeparatedCut& a, const SeparatedCut& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return a.key < b.key;
  });
  if (max_cuts >= 0 && static_cast<int>(found.size()) > max_cuts) found.resize(max_cuts);
  return found;
}

FacilitySet decode_incumbent(const OriginalPoint& x, int p, double tol) {
  const int n = x.n();
  FacilitySet open;
  for (int j = 0; j < n; ++j)
    if (x.facility_load(j) >= 1.0 - tol) open.insert(j);
  if (static_cast<int>(open.size()) > p) throw std::logic_error("integral point opens more than p facilities");
  for (int j = 0; j < n && static_cast<int>(open.size()) < p; ++j)
    if (!open.contains(j)) open.insert(j);
  return open;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kTimeLimit: return "TimeLimit";
  }
  return "?";
}

const char* to_string(NodeOutcome s) {
  switch (s) {
    case NodeOutcome::kIntegral: return "Integral";
    case NodeOutcome::kBranched: return "Branched";
    case NodeOutcome::kPrunedBound: return "PrunedBound";
    case NodeOutcome::kPrunedInfeasible: return "PrunedInfeasible";
    case NodeOutcome::kOpen: return "Open";
  }
  return "?";
}

std::vector<Triplet> load_fixings(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixings file " + path);
  std::vector<Triplet> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int i, j, k;
    if (!(ls >> i)) continue;
    std::string rest;
    if (!(ls >> j >> k) || (ls >> rest))
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": expected 'i j k'");
    if (i < 1 || i > n || j < 1 || j > n || k < 1 || k > n)
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": index out of range");
    out.push_back({i - 1, j - 1, k - 1});
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct OpenNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  double bound = 0.0;
  double parent_value = 0.0;
  bool up = false;
  FixingMask mask;
  WarmStart warm;  // parent's final basis
};

struct NodeOrder {
  // priority_queue pops the largest; "larger" here means worse.
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.up != b.up) return !a.up;
    return a.id > b.id;
  }
};

struct NodeLp {
  CgStatus status = CgStatus::kIterationLimit;
  double value = 0.0;
  double bound = 0.0;  // valid lower bound for the node
  int iterations = 0;
  int cut_rounds = 0;
};

class Tree {
 public:
  Tree(const Instance& inst, const SolveParams& params)
      : inst_(inst), params_(params), rm_(inst, params.convention), start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(params.time_limit))) {}

  RestrictedMaster& master() { return rm_; }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  bool out_of_time() const { return Clock::now() >= deadline_; }

  void seed(const GraspResult& g) {
    for (const auto& col : g.harvested) rm_.add_column(col);
    incumbent(g.best_value, g.best_set);
  }

  void incumbent(Cost value, const FacilitySet& set) {
    if (!has_ub_ || value < ub_) {
      ub_ = value;
      best_set_ = set;
      has_ub_ = true;
    }
  }

  bool has_ub() const { return has_ub_; }
  double ub() const { return has_ub_ ? static_cast<double>(ub_) : lp::kInf; }

  void apply_mask(const FixingMask& mask) {
    for (int c = 0; c < rm_.num_columns(); ++c) rm_.set_column_enabled(c, mask.allows(rm_.column(c)));
  }

  StabConfig cg_config() const {
    StabConfig cfg = params_.stab;
    cfg.threads = params_.threads;
    cfg.deadline = deadline_;
    if (has_ub_) cfg.cutoff = static_cast<double>(ub_) - 1.0 + 2e-6;
    return cfg;
  }

  OriginalPoint current_x() const {
    const auto& out = rm_.last();
    return aggregate_x(inst_, rm_.columns(), out.primal);
  }

  // Column generation plus up to `rounds` separation rounds.
  NodeLp solve_lp(const FixingMask& mask, int rounds, std::vector<double>* history) {
    NodeLp res;
    retire_idle();
    CgReport cg = run_column_generation(rm_, cg_config(), mask, params_.log);
    res.iterations += cg.iterations;
    columns_ += cg.columns_added;
    res.status = cg.status;
    if (cg.status != CgStatus::kConverged) {
      res.bound = cg.lower_bound;
      return res;
    }
    res.value = cg.value;
    res.bound = converged_bound(cg);
    if (history) history->push_back(res.value);
    if (!params_.use_cuts) return res;
    for (int round = 0; round < rounds; ++round) {
      if (fathomable(res.bound)) break;
      const OriginalPoint x = current_x();
      if (x.integral(params_.int_tol)) break;
      const auto cuts = separate_cuts(x, rm_.ranks(), params_.max_cuts_per_round, params_.cut_tol, rm_.cuts());
      if (cuts.empty()) break;
      rm_.purge_slack_cuts();
      retire_idle();
      for (const auto& c : cuts) rm_.add_cut(c.key);
      cuts_ += static_cast<int>(cuts.size());
      ++res.cut_rounds;
      cg = run_column_generation(rm_, cg_config(), mask, params_.log);
      res.iterations += cg.iterations;
      columns_ += cg.columns_added;
      res.status = cg.status;
      if (cg.status != CgStatus::kConverged) {
        res.bound = std::max(res.bound, cg.lower_bound);
        return res;
      }
      res.value = cg.value;
      res.bound = std::max(res.bound, converged_bound(cg));
      if (history) history->push_back(res.value);
    }
    return res;
  }

  void retire_idle() {
    if (params_.column_idle_limit > 0) rm_.retire_idle_columns(params_.column_idle_limit);
  }

  // Objective values are integers, so a bound above UB - 1 leaves nothing
  // strictly better.
  bool fathomable(double bound) const {
    return has_ub_ && bound >= static_cast<double>(ub_) - 1.0 + 1e-6;
  }

  bool y_integral() const {
    const auto& primal = rm_.last().primal;
    for (int c = 0; c < rm_.num_columns(); ++c) {
      const double v = primal[c];
      if (v > params_.int_tol && v < 1.0 - params_.int_tol) return false;
    }
    return true;
  }

  double max_cut_lhs(const OriginalPoint& x) const {
    double m = 0.0;
    for (double v : all_cut_lhs(x, rm_.ranks())) m = std::max(m, v);
    return m;
  }

  int columns_added() const { return columns_; }
  int cuts_added() const { return cuts_; }
  Cost ub_value() const { return ub_; }
  const FacilitySet& best_set() const { return best_set_; }

 private:
  double converged_bound(const CgReport& cg) const {
    const auto [lb1, lb2] = lp_bound_pair(cg.value, cg.minima, inst_.p());
    return std::max({lb1, lb2, cg.lower_bound});
  }

  const Instance& inst_;
  const SolveParams& params_;
  RestrictedMaster rm_;
  Clock::time_point start_, deadline_;
  bool has_ub_ = false;
  Cost ub_ = 0;
  FacilitySet best_set_;
  int columns_ = 0;
  int cuts_ = 0;
};

double gap_percent(double ub, double lb) {
  if (ub > 0) return std::max(0.0, 100.0 * (ub - lb) / ub);
  return ub - lb > 1e-9 ? 100.0 : 0.0;
}

FixingMask root_mask(const SolveParams& params) {
  FixingMask mask;
  mask.zeros = params.fixed_zero;
  return mask;
}

}  // namespace

SolveReport solve(const Instance& inst, const SolveParams& params) {
  Tree tree(inst, params);
  SolveReport rep;
  std::ostream* log = params.log;

  if (params.use_grasp) {
    const GraspResult g = run_grasp(inst, params.grasp);
    tree.seed(g);
    rep.grasp_value = g.best_value;
    if (log) *log << "grasp value=" << g.best_value << " set=" << to_string(g.best_set)
                  << " columns=" << g.harvested.size() << '\n';
  }

  std::priority_queue<OpenNode, std::vector<OpenNode>, NodeOrder> open;
  int next_id = 0;
  {
    OpenNode root;
    root.id = next_id++;
    root.mask = root_mask(params);
    root.bound = 0.0;
    open.push(std::move(root));
  }

  double lb = 0.0;
  auto record_bounds = [&](double open_min) {
    lb = tree.has_ub() ? std::min(open_min, tree.ub()) : open_min;
    rep.lb_history.push_back(lb);
    rep.ub_history.push_back(tree.ub());
  };

  bool timed_out = false;
  while (!open.empty()) {
    if (tree.out_of_time()) {
      timed_out = true;
      break;
    }
    OpenNode node = open.top();
    open.pop();
    if (tree.fathomable(node.bound)) {
      NodeRecord rec{node.id, node.parent, node.depth, node.parent_value, 0.0, false,
                     NodeOutcome::kPrunedBound, false, 0};
      rep.nodes_log.push_back(rec);
      continue;
    }
    ++rep.nodes;
    const bool is_root = node.parent < 0;
    tree.apply_mask(node.mask);
    if (!node.warm.empty()) tree.master().set_warm_start(node.warm);
    const NodeLp lp = tree.solve_lp(node.mask, is_root ? params.root_cut_rounds : params.node_cut_rounds,
                                    is_root ? &rep.root_lp_history : nullptr);

    NodeRecord rec;
    rec.id = node.id;
    rec.parent = node.parent;
    rec.depth = node.depth;
    rec.parent_value = node.parent_value;
    rec.cut_rounds = lp.cut_rounds;

    if (lp.status == CgStatus::kTimeLimit || lp.status == CgStatus::kIterationLimit) {
      // Unfinished: the node stays open with its best known bound.
      node.bound = std::max(node.bound, lp.bound);
      open.push(node);
      rec.outcome = NodeOutcome::kOpen;
      rep.nodes_log.push_back(rec);
      timed_out = true;
      break;
    }
    if (is_root) {
      rep.root_cg_iterations = lp.iterations;
      if (lp.status == CgStatus::kConverged) {
        rep.root_lp = rep.root_lp_history.front();
        rep.root_lp_final = lp.value;
        rep.root_lower_bound = lp.bound;
      }
    }
    if (lp.status == CgStatus::kInfeasible) {
      rec.outcome = NodeOutcome::kPrunedInfeasible;
    } else if (lp.status == CgStatus::kCutoff) {
      rec.outcome = NodeOutcome::kPrunedBound;
    } else {
      rec.converged = true;
      rec.value = lp.value;
      const double node_bound = std::max(node.bound, lp.bound);
      const OriginalPoint x = tree.current_x();
      if (x.integral(params.int_tol)) {
        rec.outcome = NodeOutcome::kIntegral;
        rec.y_integral = tree.y_integral();
        ++rep.integral_nodes;
        const FacilitySet set = decode_incumbent(x, inst.p(), params.int_tol);
        const Cost value = ordered_value(inst, set);
        if (std::abs(static_cast<double>(value) - lp.value) > 1e-6) ++rep.decode_mismatches;
        rep.max_cut_lhs_at_integral = std::max(rep.max_cut_lhs_at_integral, tree.max_cut_lhs(x));
        tree.incumbent(value, set);
        if (log) *log << "node " << node.id << " integral value=" << value << " lp=" << lp.value << '\n';
      } else if (tree.fathomable(node_bound)) {
        rec.outcome = NodeOutcome::kPrunedBound;
      } else {
        const auto t = select_branching_variable(inst, x, params.strategy, params.theta, params.int_tol);
        rec.outcome = NodeOutcome::kBranched;
        for (int up = 1; up >= 0; --up) {
          OpenNode child;
          child.id = next_id++;
          child.parent = node.id;
          child.depth = node.depth + 1;
          child.bound = node_bound;
          child.parent_value = lp.value;
          child.up = up == 1;
          child.mask = node.mask;
          child.warm = tree.master().warm_start();
          (up ? child.mask.ones : child.mask.zeros).push_back(*t);
          open.push(std::move(child));
        }
        if (log)
          *log << "node " << node.id << " lp=" << lp.value << " branch x(" << t->client + 1 << ','
               << t->facility + 1 << ',' << t->position + 1 << ")=" << x.at(t->client, t->facility, t->position)
               << '\n';
      }
    }
    rep.nodes_log.push_back(rec);
    record_bounds(open.empty() ? tree.ub() : open.top().bound);
  }

  if (!tree.has_ub()) throw std::runtime_error("search ended without a feasible solution");
  rep.status = timed_out ? SolveStatus::kTimeLimit : SolveStatus::kOptimal;
  rep.has_incumbent = true;
  rep.best_value = tree.ub_value();
  rep.best_set = tree.best_set();
  if (timed_out) {
    double open_min = tree.ub();
    for (auto copy = open; !copy.empty(); copy.pop()) open_min = std::min(open_min, copy.top().bound);
    rep.lower_bound = std::max(lb, std::min(open_min, tree.ub()));
  } else {
    rep.lower_bound = tree.ub();
  }
  rep.gap_pct = gap_percent(tree.ub(), rep.lower_bound);
  rep.columns = tree.master().num_columns();
  rep.cuts = tree.master().num_cuts();
  rep.time_s = tree.elapsed();
  return rep;
}

RelaxReport solve_relaxation(const Instance& inst, const SolveParams& params) {
  const auto start = Clock::now();
  RestrictedMaster rm(inst, params.convention);
  if (params.use_grasp)
    for (const auto& col : run_grasp(inst, params.grasp).harvested) rm.add_column(col);
  const FixingMask mask = root_mask(params);
  StabConfig cfg = params.stab;
  cfg.threads = params.threads;
  CgReport cg = run_column_generation(rm, cfg, mask, params.log);
  RelaxReport rep;
  rep.iterations = cg.iterations;
  for (int round = 0; params.use_cuts && round < params.root_cut_rounds && cg.status == CgStatus::kConverged;
       ++round) {
    const OriginalPoint x = aggregate_x(inst, rm.columns(), rm.last().primal);
    const auto cuts = separate_cuts(x, rm.ranks(), params.max_cuts_per_round, params.cut_tol, rm.cuts());
    if (cuts.empty()) break;
    for (const auto& c : cuts) rm.add_cut(c.key);
    cg = run_column_generation(rm, cfg, mask, params.log);
    rep.iterations += cg.iterations;
  }
  if (cg.status != CgStatus::kConverged)
    throw std::runtime_error(std::string("root column generation ended with ") + to_string(cg.status));
  rep.lp_value = cg.value;
  rep.lower_bound = cg.lower_bound;
  rep.columns = rm.num_columns();
  rep.cuts = rm.num_cuts();
  rep.time_s = std::chrono::duration<double>(Clock::now() - start).count();
  return rep;
}

}  // namespace domp
