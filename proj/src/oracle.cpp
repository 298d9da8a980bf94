#include "domp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace domp {

std::uint64_t binomial(int n, int p) {
  if (p < 0 || p > n) return 0;
  p = std::min(p, n - p);
  unsigned __int128 result = 1;
  for (int t = 1; t <= p; ++t) {
    result = result * static_cast<unsigned>(n - p + t) / static_cast<unsigned>(t);
    if (result > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(result);
}

OracleResult solve_exhaustive(const Instance& inst, std::uint64_t limit) {
  const int n = inst.n();
  const int p = inst.p();
  const std::uint64_t count = binomial(n, p);
  if (count > limit)
    throw OracleTooLarge("instance too large for oracle: C(" + std::to_string(n) + "," +
                         std::to_string(p) + ") = " + std::to_string(count) +
                         " subsets exceeds limit " + std::to_string(limit));

  OracleResult result;
  result.best_value = std::numeric_limits<Cost>::max();

  // mins[d] holds per-client minima over the first d chosen facilities.
  std::vector<std::vector<Cost>> mins(p + 1, std::vector<Cost>(n, std::numeric_limits<Cost>::max()));
  std::vector<int> chosen(p);
  std::vector<Cost> scratch(n);

  auto evaluate = [&]() {
    scratch = mins[p];
    const Cost value = ordered_value_of_costs(inst, scratch);
    ++result.subsets_evaluated;
    if (value < result.best_value) {
      result.best_value = value;
      result.best_sets.clear();
    }
    if (value == result.best_value) result.best_sets.emplace_back(chosen);
  };

  auto descend = [&](auto&& self, int depth, int first) -> void {
    if (depth == p) {
      evaluate();
      return;
    }
    for (int j = first; j <= n - (p - depth); ++j) {
      chosen[depth] = j;
      for (int i = 0; i < n; ++i) mins[depth + 1][i] = std::min(mins[depth][i], inst.cost(i, j));
      self(self, depth + 1, j + 1);
    }
  };
  descend(descend, 0, 0);
  return result;
}

}  // namespace domp
