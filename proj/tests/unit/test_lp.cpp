#include <doctest.h>

#include <cmath>
#include <random>

#include "domp/lp.hpp"

using namespace domp::lp;

namespace {

double dot_row(const LinearProgram& lp, int r, const std::vector<double>& x) {
  return lp.activities(x)[r];
}

// Primal feasibility, dual signs and complementary slackness of an optimum.
void check_optimality(const LinearProgram& lp, const Outcome& out, double tol = 1e-7) {
  REQUIRE(out.status == Status::kOptimal);
  const auto act = lp.activities(out.primal);
  double obj = 0.0;
  for (int j = 0; j < lp.num_columns(); ++j) {
    obj += lp.cost(j) * out.primal[j];
    CHECK(out.primal[j] >= lp.lower(j) - tol);
    CHECK(out.primal[j] <= lp.upper(j) + tol);
  }
  CHECK(obj == doctest::Approx(out.objective).epsilon(1e-9));
  for (int r = 0; r < lp.num_rows(); ++r) {
    const double y = out.duals[r];
    switch (lp.sense(r)) {
      case RowSense::kGreaterEqual:
        CHECK(act[r] >= lp.rhs(r) - tol);
        CHECK(y >= -tol);
        break;
      case RowSense::kLessEqual:
        CHECK(act[r] <= lp.rhs(r) + tol);
        CHECK(y <= tol);
        break;
      case RowSense::kEqual: CHECK(std::abs(act[r] - lp.rhs(r)) <= tol); break;
    }
    CHECK(std::abs(y * (act[r] - lp.rhs(r))) <= tol);
  }
  for (int j = 0; j < lp.num_columns(); ++j) {
    double d = lp.cost(j);
    for (const auto& [r, a] : lp.column(j)) d -= out.duals[r] * a;
    const double x = out.primal[j];
    if (x > lp.lower(j) + tol && x < lp.upper(j) - tol) CHECK(std::abs(d) <= 1e-6);
    if (x <= lp.lower(j) + tol && lp.lower(j) < lp.upper(j)) CHECK(d >= -1e-6);
    if (x >= lp.upper(j) - tol && lp.lower(j) < lp.upper(j)) CHECK(d <= 1e-6);
  }
}

LinearProgram random_lp(std::mt19937_64& rng, int m, int n) {
  std::uniform_int_distribution<int> coef(-3, 6), cost(1, 20), pick(0, 2);
  LinearProgram lp;
  for (int r = 0; r < m; ++r) lp.add_row(r % 3 == 0 ? RowSense::kLessEqual : RowSense::kGreaterEqual,
                                         r % 3 == 0 ? 40.0 : 1.0 + r % 4);
  for (int j = 0; j < n; ++j) {
    std::vector<Entry> e;
    for (int r = 0; r < m; ++r)
      if (pick(rng) == 0) {
        const int v = coef(rng);
        if (v != 0) e.emplace_back(r, v);
      }
    lp.add_column(cost(rng), e, 0.0, pick(rng) == 0 ? 5.0 : kInf);
  }
  return lp;
}

}  // namespace

TEST_CASE("one-variable LP") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 3.0);
  const std::vector<Entry> e{{0, 1.0}};
  lp.add_column(1.0, e);
  const Outcome out = solve(lp);
  REQUIRE(out.status == Status::kOptimal);
  CHECK(out.objective == doctest::Approx(3.0));
  CHECK(out.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("contradictory rows give a verifiable certificate") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 2.0);
  lp.add_row(RowSense::kLessEqual, 1.0);
  const std::vector<Entry> e{{0, 1.0}, {1, 1.0}};
  lp.add_column(0.0, e);
  const Outcome out = solve(lp);
  REQUIRE(out.status == Status::kInfeasible);
  CHECK(verify_farkas(lp, out.farkas));
  CHECK(farkas_margin(lp, out.farkas) > 0.0);
  std::vector<double> wrong{-1.0, 0.0};
  CHECK_FALSE(verify_farkas(lp, wrong));
}

TEST_CASE("unbounded") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 1.0);
  const std::vector<Entry> e{{0, 1.0}};
  lp.add_column(-1.0, e);
  CHECK(solve(lp).status == Status::kUnbounded);
}

TEST_CASE("random LPs satisfy the optimality conditions") {
  std::mt19937_64 rng(11);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 60; ++t) {
    const LinearProgram lp = random_lp(rng, 4 + t % 9, 6 + t % 13);
    const Outcome out = solve(lp);
    if (out.status == Status::kOptimal) {
      ++optimal;
      check_optimality(lp, out);
    } else if (out.status == Status::kInfeasible) {
      ++infeasible;
      CHECK(verify_farkas(lp, out.farkas));
    } else {
      CHECK(out.status == Status::kUnbounded);
    }
  }
  CHECK(optimal > 20);
}

TEST_CASE("tie rules and warm starts reach the same optimum") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 25; ++t) {
    LinearProgram lp = random_lp(rng, 8, 14);
    const Outcome base = solve(lp);
    if (base.status != Status::kOptimal) continue;
    for (TieRule rule : {TieRule::kLowestIndex, TieRule::kHighestIndex, TieRule::kLexicographic}) {
      Options o;
      o.tie_rule = rule;
      const Outcome other = solve(lp, nullptr, o);
      REQUIRE(other.status == Status::kOptimal);
      CHECK(other.objective == doctest::Approx(base.objective).epsilon(1e-9));
    }
    // Appending a column and warm-starting matches a cold solve.
    const std::vector<Entry> e{{1, 1.0}, {2, 2.0}};
    lp.add_column(0.5, e, 0.0, 3.0);
    const Outcome warm = solve(lp, &base.basis);
    const Outcome cold = solve(lp);
    REQUIRE(warm.status == cold.status);
    if (cold.status == Status::kOptimal) {
      CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
      check_optimality(lp, warm);
    }
  }
}

TEST_CASE("added rows and columns") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 4.0);
  const std::vector<Entry> a{{0, 1.0}}, b{{0, 2.0}};
  lp.add_column(3.0, a);
  lp.add_column(5.0, b);
  const Outcome first = solve(lp);
  REQUIRE(first.status == Status::kOptimal);
  CHECK(first.objective == doctest::Approx(10.0));

  // Nonnegative reduced cost: optimum unchanged.
  const std::vector<Entry> c{{0, 1.0}};
  lp.add_column(4.0, c);
  CHECK(solve(lp, &first.basis).objective == doctest::Approx(10.0));

  // A violated <= row raises the optimum.
  const std::vector<Entry> row{{1, 1.0}};
  lp.add_row(RowSense::kLessEqual, 1.0, row);
  const Outcome second = solve(lp, &first.basis);
  REQUIRE(second.status == Status::kOptimal);
  CHECK(second.objective >= first.objective - 1e-9);
  CHECK(second.objective == doctest::Approx(5.0 + 3.0 * 2.0));
}

TEST_CASE("bounds disable and restore columns") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 1.0);
  lp.add_row(RowSense::kGreaterEqual, 1.0);
  const std::vector<Entry> both{{0, 1.0}, {1, 1.0}}, first{{0, 1.0}}, second{{1, 1.0}};
  lp.add_column(3.0, both, 0.0, 1.0);
  lp.add_column(2.0, first, 0.0, 1.0);
  lp.add_column(2.0, second, 0.0, 1.0);
  const Outcome base = solve(lp);
  CHECK(base.objective == doctest::Approx(3.0));
  lp.set_column_bounds(0, 0.0, 0.0);
  lp.set_column_bounds(1, 0.0, 0.0);
  const Outcome off = solve(lp, &base.basis);
  REQUIRE(off.status == Status::kInfeasible);
  CHECK(verify_farkas(lp, off.farkas));
  lp.set_column_bounds(0, 0.0, 1.0);
  lp.set_column_bounds(1, 0.0, 1.0);
  CHECK(solve(lp, &off.basis).objective == doctest::Approx(3.0));
  lp.set_column_bounds(2, 0.0, 0.0);
  CHECK(solve(lp).objective == doctest::Approx(3.0));
}

TEST_CASE("degenerate assignment LP terminates") {
  // 6x6 assignment: heavily degenerate.
  LinearProgram lp;
  const int n = 6;
  for (int r = 0; r < 2 * n; ++r) lp.add_row(RowSense::kEqual, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::vector<Entry> e{{i, 1.0}, {n + j, 1.0}};
      lp.add_column((i * 7 + j * 3) % 5, e, 0.0, 1.0);
    }
  const Outcome out = solve(lp);
  check_optimality(lp, out);
  CHECK(out.objective == doctest::Approx(0.0));
}

TEST_CASE("factor cache across growing programs") {
  std::mt19937_64 rng(13);
  LinearProgram lp = random_lp(rng, 10, 20);
  FactorCache cache;
  Outcome prev = solve(lp, nullptr, {}, &cache);
  for (int t = 0; t < 8; ++t) {
    const std::vector<Entry> e{{t % 10, 1.0}, {(t + 3) % 10, 1.0}};
    lp.add_column(1.0 + t, e, 0.0, 2.0);
    if (t % 3 == 2) {
      const std::vector<Entry> row{{t, 1.0}, {t + 1, 1.0}};
      lp.add_row(RowSense::kLessEqual, 3.0, row);
    }
    const Outcome cached = solve(lp, &prev.basis, {}, &cache);
    const Outcome cold = solve(lp);
    REQUIRE(cached.status == cold.status);
    if (cold.status == Status::kOptimal)
      CHECK(cached.objective == doctest::Approx(cold.objective).epsilon(1e-9));
    prev = cached;
  }
}

TEST_CASE("row removal") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 1.0);
  lp.add_row(RowSense::kLessEqual, 0.5);
  lp.add_row(RowSense::kGreaterEqual, 2.0);
  const std::vector<Entry> e{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  lp.add_column(1.0, e);
  CHECK(solve(lp).status == Status::kInfeasible);
  lp.remove_rows({false, true, false});
  CHECK(lp.num_rows() == 2);
  CHECK(lp.column(0) == std::vector<Entry>{{0, 1.0}, {1, 1.0}});
  CHECK(solve(lp).objective == doctest::Approx(2.0));
  CHECK(dot_row(lp, 1, {2.0}) == 2.0);
}

TEST_CASE("dump lists every row") {
  LinearProgram lp;
  lp.add_row(RowSense::kGreaterEqual, 1.0);
  const std::vector<Entry> e{{0, 2.0}};
  lp.add_column(1.0, e);
  const std::string s = dump(lp);
  CHECK(s.find(">=") != std::string::npos);
}
