#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "domp/bpc.hpp"
#include "domp/grasp.hpp"
#include "domp/instance.hpp"
#include "domp/oracle.hpp"
#include "domp/woc.hpp"

namespace fs = std::filesystem;
using namespace domp;

namespace {

// Bad input files are usage errors; everything thrown later is a solver error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance read_instance(const std::string& path) {
  try {
    return load_instance(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

struct SolveFlags {
  std::string instance;
  double time_limit = 1800.0;
  bool no_grasp = false;
  bool no_stab = false;
  double stab_delta = 0.6;
  int strategy = 1;
  double theta = 0.5;
  bool no_cuts = false;
  std::string fix_file;
  int n1 = 20, n2 = 10, q = -1;
  std::uint64_t seed = 1;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--time-limit", f.time_limit, "Seconds")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-grasp", f.no_grasp, "Skip the GRASP warm start");
  auto* no_stab = cmd->add_flag("--no-stab", f.no_stab, "Disable dual stabilization");
  cmd->add_option("--stab-delta", f.stab_delta, "Initial stabilization weight in (0, 1]")
      ->check(CLI::Range(1e-9, 1.0))
      ->excludes(no_stab);
  cmd->add_option("--branch-strategy", f.strategy, "1 weighted, 2 min, 3 max")->check(CLI::Range(1, 3));
  cmd->add_option("--theta", f.theta, "Weight of strategy 1")->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--no-cuts", f.no_cuts, "Disable cut separation");
  cmd->add_option("--fix-file", f.fix_file, "Zero fixings, one 'i j k' per line")
      ->check(CLI::ExistingFile);
  cmd->add_option("--n1", f.n1, "GRASP replications")->check(CLI::PositiveNumber);
  cmd->add_option("--n2", f.n2, "GRASP local search passes")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "GRASP seed");
}

SolveParams make_params(const SolveFlags& f, int n, int threads, std::ostream* log) {
  SolveParams p;
  p.time_limit = f.time_limit;
  p.use_grasp = !f.no_grasp;
  p.grasp.replications = f.n1;
  p.grasp.local_search_passes = f.n2;
  p.grasp.partial_size = f.q;
  p.grasp.seed = f.seed;
  p.stab.enabled = !f.no_stab;
  p.stab.delta_init = f.stab_delta;
  p.strategy = static_cast<BranchStrategy>(f.strategy);
  p.theta = f.theta;
  p.use_cuts = !f.no_cuts;
  if (!f.fix_file.empty()) {
    try {
      p.fixed_zero = load_fixings(f.fix_file, n);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  p.threads = threads;
  p.stab.threads = threads;
  p.log = log;
  return p;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string summary_line(const Instance& inst, const SolveReport& r) {
  std::ostringstream os;
  os << inst.n() << ' ' << inst.p() << ' ' << to_string(r.status) << ' '
     << (r.has_incumbent ? std::to_string(r.best_value) : std::string("inf")) << ' '
     << fixed(r.lower_bound, 6) << ' ' << fixed(r.gap_pct, 4) << ' ' << r.nodes << ' ' << r.columns
     << ' ' << r.cuts << ' ' << fixed(r.time_s, 3);
  return os.str();
}

int run_generate(int n, int p, std::uint64_t seed, const std::string& out) {
  if (p < 1 || p > n) throw UsageError("need 1 <= p <= n");
  const Instance inst = generate(n, p, seed);
  if (out.empty() || out == "-") write_instance(inst, std::cout);
  else save_instance(inst, out);
  return 0;
}

int run_oracle(const std::string& path, std::uint64_t limit) {
  const Instance inst = read_instance(path);
  const OracleResult r = solve_exhaustive(inst, limit);
  std::cout << "value " << r.best_value << '\n'
            << "set " << to_string(r.best_sets.front()) << '\n'
            << "optima " << r.best_sets.size() << '\n'
            << "subsets " << r.subsets_evaluated << '\n';
  return 0;
}

int run_grasp_cmd(const std::string& path, const SolveFlags& f) {
  const Instance inst = read_instance(path);
  GraspConfig cfg;
  cfg.replications = f.n1;
  cfg.local_search_passes = f.n2;
  cfg.partial_size = f.q;
  cfg.seed = f.seed;
  const GraspResult g = run_grasp(inst, cfg);
  std::cout << "value " << g.best_value << '\n'
            << "set " << to_string(g.best_set) << '\n'
            << "columns " << g.harvested.size() << '\n';
  return 0;
}

// Oracle value when enumeration is cheap enough, otherwise nothing.
std::optional<Cost> guarded_oracle(const Instance& inst, std::uint64_t limit) {
  if (binomial(inst.n(), inst.p()) > limit) return std::nullopt;
  return solve_exhaustive(inst, limit).best_value;
}

int run_relax(const std::string& path, const std::string& formulation, bool strong,
              const SolveFlags& f, int threads, std::uint64_t oracle_limit, std::ostream* log) {
  const Instance inst = read_instance(path);
  double value = 0.0;
  int vars = 0;
  if (formulation == "woc") {
    WocSolution w;
    try {
      w = solve_woc(inst, strong);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (w.status != lp::Status::kOptimal)
      throw std::runtime_error(std::string("WOC relaxation ") + lp::to_string(w.status));
    value = w.value;
    vars = w.variables;
  } else {
    SolveParams p = make_params(f, inst.n(), threads, log);
    p.use_cuts = strong;
    const RelaxReport r = solve_relaxation(inst, p);
    value = r.lp_value;
    vars = r.columns;
  }
  std::cout << "lp_value " << fixed(value, 6) << '\n' << "variables " << vars << '\n';
  if (const auto opt = guarded_oracle(inst, oracle_limit))
    std::cout << "oracle " << *opt << '\n' << "gap_pct " << fixed(gap_lp_percent(*opt, value), 4) << '\n';
  return 0;
}

int run_solve(const SolveFlags& f, int threads, std::ostream* log) {
  const Instance inst = read_instance(f.instance);
  const SolveReport r = solve(inst, make_params(f, inst.n(), threads, log));
  if (r.has_incumbent) std::cerr << "set " << to_string(r.best_set) << '\n';
  std::cout << summary_line(inst, r) << '\n';
  return 0;
}

int run_compare(const std::string& dir, const std::string& out_path, const SolveFlags& f, int threads,
                std::uint64_t oracle_limit, std::ostream* log) {
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".domp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Instance> instances;
  for (const auto& p : files) instances.push_back(read_instance(p.string()));

  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw UsageError("cannot write " + out_path);
  }
  std::ostream& out = file.is_open() ? file : std::cout;
  out << "n\tp\tgaplp_mp\tgaplp_woc\tvars_mp\tvars_woc\tvalue\tlb\tgap_pct\tnodes\tcols\tcuts"
         "\ttime_s\n";
  for (std::size_t t = 0; t < files.size(); ++t) {
    const Instance& inst = instances[t];
    const SolveParams params = make_params(f, inst.n(), threads, log);
    const SolveReport r = solve(inst, params);
    const auto opt = guarded_oracle(inst, oracle_limit);
    const double reference = opt ? static_cast<double>(*opt) : static_cast<double>(r.best_value);
    const GapReport g = gap_report(inst, reference, params);
    out << inst.n() << '\t' << inst.p() << '\t'
        << fixed(g.gap_mp_pct, 4) << '\t' << fixed(g.gap_woc_pct, 4) << '\t' << g.mp_columns << '\t'
        << g.woc_variables << '\t' << (r.has_incumbent ? std::to_string(r.best_value) : "inf") << '\t'
        << fixed(r.lower_bound, 6) << '\t' << fixed(r.gap_pct, 4) << '\t' << r.nodes << '\t'
        << r.columns << '\t' << r.cuts << '\t' << fixed(r.time_s, 3) << '\n';
    out.flush();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete ordered median solver"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  std::string log_path;
  app.add_option("--threads", threads, "Pricing threads")->check(CLI::PositiveNumber);
  app.add_option("--log", log_path, "Progress log file ('-' for stderr)");

  int gen_n = 0, gen_p = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Random instance");
  gen->add_option("--n", gen_n, "Points")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "Facilities")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string path;
  std::uint64_t oracle_limit = 10'000'000;
  auto* orc = app.add_subcommand("oracle", "Exhaustive enumeration");
  orc->add_option("--instance", path, "Instance file")->required();
  orc->add_option("--limit", oracle_limit, "Largest C(n, p) to enumerate");

  SolveFlags flags;
  auto* gr = app.add_subcommand("grasp", "GRASP heuristic");
  gr->add_option("--instance", path, "Instance file")->required();
  gr->add_option("--n1", flags.n1, "Replications")->check(CLI::PositiveNumber);
  gr->add_option("--n2", flags.n2, "Local search passes")->check(CLI::NonNegativeNumber);
  gr->add_option("--q", flags.q, "Random partial size")->check(CLI::NonNegativeNumber);
  gr->add_option("--seed", flags.seed, "Seed");

  std::string formulation = "mp";
  bool strong = false;
  auto* rel = app.add_subcommand("relax", "Root LP relaxation");
  rel->add_option("--instance", path, "Instance file")->required();
  rel->add_option("--formulation", formulation, "mp or woc")
      ->check(CLI::IsMember({"mp", "woc"}))
      ->required();
  rel->add_flag("--strong", strong, "mp: separate cuts; woc: add strong order rows");
  rel->add_option("--oracle-limit", oracle_limit, "Largest C(n, p) for the gap line");

  auto* sol = app.add_subcommand("solve", "Branch-price-and-cut");
  sol->add_option("--instance", flags.instance, "Instance file")->required();
  add_solver_flags(sol, flags);

  std::string dir, out;
  auto* cmp = app.add_subcommand("compare", "Relaxations, solve and oracle over a directory");
  cmp->add_option("--dir", dir, "Directory of .domp files")->required();
  cmp->add_option("--out", out, "TSV output (default stdout)");
  cmp->add_option("--oracle-limit", oracle_limit, "Largest C(n, p) enumerated for the reference");
  add_solver_flags(cmp, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::ofstream log_file;
    std::ostream* log = nullptr;
    if (log_path == "-") {
      log = &std::cerr;
    } else if (!log_path.empty()) {
      log_file.open(log_path);
      if (!log_file) throw UsageError("cannot write " + log_path);
      log = &log_file;
    }
    if (*gen) return run_generate(gen_n, gen_p, gen_seed, gen_out);
    if (*orc) return run_oracle(path, oracle_limit);
    if (*gr) return run_grasp_cmd(path, flags);
    if (*rel) return run_relax(path, formulation, strong, flags, threads, oracle_limit, log);
    if (*sol) return run_solve(flags, threads, log);
    if (*cmp) return run_compare(dir, out, flags, threads, oracle_limit, log);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
