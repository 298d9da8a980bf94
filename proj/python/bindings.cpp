#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "domp/bpc.hpp"
#include "domp/evaluation.hpp"
#include "domp/grasp.hpp"
#include "domp/instance.hpp"
#include "domp/oracle.hpp"
#include "domp/woc.hpp"

namespace py = pybind11;
using namespace domp;

namespace {

// Python side uses 1-based facility indices, like the CLI.
std::vector<int> to_python(const FacilitySet& s) {
  std::vector<int> out;
  for (int j : s) out.push_back(j + 1);
  return out;
}

FacilitySet from_python(const std::vector<int>& items) {
  std::vector<int> zero;
  for (int j : items) zero.push_back(j - 1);
  return FacilitySet(zero);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete ordered median solver";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<OracleTooLarge>(m, "OracleTooLarge", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def(py::init([](int p, const std::vector<std::vector<Cost>>& costs, const std::vector<Cost>& weights) {
             std::vector<Cost> flat;
             for (const auto& row : costs) flat.insert(flat.end(), row.begin(), row.end());
             return Instance(static_cast<int>(costs.size()), p, flat, weights);
           }),
           py::arg("p"), py::arg("costs"), py::arg("weights"))
      .def_property_readonly("n", &Instance::n)
      .def_property_readonly("p", &Instance::p)
      .def_property_readonly("costs",
                             [](const Instance& inst) {
                               std::vector<std::vector<Cost>> rows(inst.n());
                               for (int i = 0; i < inst.n(); ++i)
                                 for (int j = 0; j < inst.n(); ++j) rows[i].push_back(inst.cost(i, j));
                               return rows;
                             })
      .def_property_readonly("weights",
                             [](const Instance& inst) {
                               return std::vector<Cost>(inst.weights().begin(), inst.weights().end());
                             })
      .def("with_p", &Instance::with_p)
      .def("save", [](const Instance& inst, const std::string& path) { save_instance(inst, path); })
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& inst) {
        return "<Instance n=" + std::to_string(inst.n()) + " p=" + std::to_string(inst.p()) + ">";
      });

  m.def("generate", &generate, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("load", [](const std::string& path) { return load_instance(path); }, py::arg("path"));
  m.def("example", &example_instance);

  m.def("ranks", [](const Instance& inst) {
    const RankMatrix R(inst);
    std::vector<std::vector<int>> rows(inst.n());
    for (int i = 0; i < inst.n(); ++i)
      for (int j = 0; j < inst.n(); ++j) rows[i].push_back(R.rank(i, j));
    return rows;
  });

  m.def(
      "ordered_value",
      [](const Instance& inst, const std::vector<int>& open) { return ordered_value_any(inst, from_python(open)); },
      py::arg("instance"), py::arg("open"), "Ordered median value of a 1-based facility list.");

  m.def(
      "oracle",
      [](const Instance& inst, std::uint64_t limit) {
        const OracleResult r = solve_exhaustive(inst, limit);
        py::list sets;
        for (const auto& s : r.best_sets) sets.append(to_python(s));
        return py::make_tuple(r.best_value, sets);
      },
      py::arg("instance"), py::arg("limit") = 10'000'000);

  m.def(
      "grasp",
      [](const Instance& inst, int n1, int n2, std::uint64_t seed) {
        GraspConfig cfg;
        cfg.replications = n1;
        cfg.local_search_passes = n2;
        cfg.seed = seed;
        const GraspResult r = run_grasp(inst, cfg);
        return py::make_tuple(r.best_value, to_python(r.best_set), r.harvested.size());
      },
      py::arg("instance"), py::arg("n1") = 20, py::arg("n2") = 10, py::arg("seed") = 1);

  m.def(
      "woc_relaxation",
      [](const Instance& inst, bool strong) {
        const WocSolution s = solve_woc(inst, strong);
        if (s.status != lp::Status::kOptimal)
          throw std::runtime_error(std::string("WOC relaxation ") + lp::to_string(s.status));
        return py::make_tuple(s.value, s.variables);
      },
      py::arg("instance"), py::arg("strong") = false);

  m.def(
      "mp_relaxation",
      [](const Instance& inst, bool cuts) {
        SolveParams p;
        p.use_cuts = cuts;
        const RelaxReport r = solve_relaxation(inst, p);
        return py::make_tuple(r.lp_value, r.columns);
      },
      py::arg("instance"), py::arg("cuts") = false);

  m.def(
      "solve",
      [](const Instance& inst, double time_limit, bool grasp, bool stabilization, double stab_delta,
         int branch_strategy, double theta, bool cuts, int threads) {
        SolveParams p;
        p.time_limit = time_limit;
        p.use_grasp = grasp;
        p.stab.enabled = stabilization;
        p.stab.delta_init = stab_delta;
        if (branch_strategy < 1 || branch_strategy > 3) throw py::value_error("branch_strategy must be 1, 2 or 3");
        p.strategy = static_cast<BranchStrategy>(branch_strategy);
        p.theta = theta;
        p.use_cuts = cuts;
        p.threads = threads;
        p.stab.threads = threads;
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = solve(inst, p);
        }
        py::dict d;
        d["status"] = to_string(r.status);
        d["value"] = r.has_incumbent ? py::object(py::int_(r.best_value)) : py::object(py::none());
        d["open"] = to_python(r.best_set);
        d["lower_bound"] = r.lower_bound;
        d["gap_pct"] = r.gap_pct;
        d["nodes"] = r.nodes;
        d["columns"] = r.columns;
        d["cuts"] = r.cuts;
        d["time_s"] = r.time_s;
        d["root_lp"] = r.root_lp;
        return d;
      },
      py::arg("instance"), py::arg("time_limit") = 1800.0, py::arg("grasp") = true,
      py::arg("stabilization") = true, py::arg("stab_delta") = 0.6, py::arg("branch_strategy") = 1,
      py::arg("theta") = 0.5, py::arg("cuts") = true, py::arg("threads") = 1);
}
