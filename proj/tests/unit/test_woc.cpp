#include <doctest.h>

#include "domp/grasp.hpp"
#include "domp/oracle.hpp"
#include "domp/stabilization.hpp"
#include "domp/woc.hpp"
#include "helpers.hpp"

using namespace domp;

TEST_CASE("model sizes") {
  const WocModel weak = build_woc(example_instance(), false);
  CHECK(weak.lp.num_rows() == 18);
  CHECK(weak.num_variables() == 30);
  const WocModel strong = build_woc(example_instance(), true);
  CHECK(strong.lp.num_rows() == 36);
  CHECK_THROWS(build_woc(generate(8, 2, 1), false, 7));
}

TEST_CASE("WOC relaxation bounds the integer optimum") {
  CHECK(solve_woc(example_instance(), false).value <= 9.0 + 1e-9);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance inst = generate(7, 2 + static_cast<int>(seed % 2), seed);
    const Cost opt = solve_exhaustive(inst).best_value;
    const WocSolution weak = solve_woc(inst, false);
    const WocSolution strong = solve_woc(inst, true);
    REQUIRE(weak.status == lp::Status::kOptimal);
    REQUIRE(strong.status == lp::Status::kOptimal);
    CHECK(weak.value <= opt + 1e-6);
    CHECK(strong.value <= opt + 1e-6);
    CHECK(strong.value >= weak.value - 1e-6);
  }
}

TEST_CASE("mapping an integral master solution") {
  const Instance inst = example_instance();
  const RankMatrix R(inst);
  const auto cols = solution_to_columns(inst, R, FacilitySet{0, 2});
  MappedPoint pt = map_master_point(inst, cols, {1.0, 1.0});
  CHECK(pt.x.at(0, 0, 0) == 1.0);
  CHECK(pt.x.at(2, 2, 1) == 1.0);
  CHECK(pt.x.at(1, 0, 2) == 1.0);
  CHECK(pt.y == std::vector<double>{1.0, 0.0, 1.0});
  double total = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) total += pt.x.at(i, j, k);
  CHECK(total == 3.0);
  CHECK(check_woc_rows(build_woc(inst, true), inst, pt).max_violation <= 1e-12);

  const MappedPoint zero = map_master_point(inst, cols, {0.0, 0.0});
  CHECK(zero.y == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("cardinality lifting") {
  MappedPoint pt;
  pt.y = {0.5, 0.0, 0.25};
  lift_cardinality(pt, 2);
  CHECK(pt.y[0] == 1.0);
  CHECK(pt.y[1] == 0.75);
  CHECK(pt.y[2] == 0.25);
}

TEST_CASE("mapped root points are WOC feasible") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance inst = generate(6 + static_cast<int>(seed % 4), 2, seed);
    RestrictedMaster rm(inst);
    for (const auto& c : run_grasp(inst, {}).harvested) rm.add_column(c);
    const CgReport cg = run_column_generation(rm, {}, {});
    REQUIRE(cg.status == CgStatus::kConverged);
    const auto& primal = rm.last().primal;
    MappedPoint pt = map_master_point(inst, rm.columns(), {primal.begin(), primal.begin() + rm.num_columns()});
    lift_cardinality(pt, inst.p());
    CHECK(check_woc_rows(build_woc(inst, false), inst, pt).max_violation <= 1e-7);
    CHECK(cg.value >= solve_woc(inst, false).value - 1e-6);
  }
}

TEST_CASE("gap report") {
  const GapReport g = gap_report(example_instance(), 9.0);
  CHECK(g.mp_lp == doctest::Approx(9.0));
  CHECK(g.gap_mp_pct == doctest::Approx(0.0));
  CHECK(g.gap_mp_pct <= g.gap_woc_pct + 1e-4);
  CHECK(gap_lp_percent(100.0, 100.0) == 0.0);
  CHECK(gap_lp_percent(200.0, 150.0) == 25.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance inst = generate(8, 3, seed);
    const GapReport r = gap_report(inst, static_cast<double>(solve_exhaustive(inst).best_value));
    CHECK(r.gap_mp_pct <= r.gap_woc_pct + 1e-4);
    CHECK(r.gap_mp_pct >= -1e-6);
  }
}

TEST_CASE("LP text export") {
  const std::string text = export_lp_text(build_woc(example_instance(), false));
  CHECK(text.rfind("minimize", 0) == 0);
  CHECK(text.find("subject to") != std::string::npos);
  CHECK(text.find("bounds") != std::string::npos);
  CHECK(text.find("x1_1_1") != std::string::npos);
  CHECK(text.find("end") != std::string::npos);
}
