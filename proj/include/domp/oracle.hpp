#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/instance.hpp"

namespace domp {

struct OracleResult {
  Cost best_value = 0;
  std::vector<FacilitySet> best_sets;  // all optima, lexicographic order
  std::uint64_t subsets_evaluated = 0;
};

class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// C(n, p), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int p);

/// Evaluates z(J) for every p-subset. Throws OracleTooLarge when C(n, p)
/// exceeds `limit`.
OracleResult solve_exhaustive(const Instance& inst, std::uint64_t limit = 10'000'000);

}  // namespace domp
