#pragma once

#include <cstdint>
#include <vector>

#include "domp/evaluation.hpp"
#include "domp/instance.hpp"
#include "domp/rng.hpp"

namespace domp {

struct GraspConfig {
  int replications = 20;        // n1
  int local_search_passes = 10; // n2
  int partial_size = -1;        // q; negative means floor(p / 2)
  std::uint64_t seed = 1;
};

struct GraspResult {
  FacilitySet best_set;
  Cost best_value = 0;
  std::vector<Column> harvested;      // deduplicated
  std::vector<Cost> best_history;     // incumbent after each replication
};

/// q distinct facilities drawn uniformly without replacement.
FacilitySet construct_randomized_partial(const Instance& inst, int q, Rng& rng);

/// Adds the facility minimizing z(J + j) until |J| = p; ties go to the
/// smallest index.
FacilitySet construct_greedy(const Instance& inst, FacilitySet partial);

struct LocalSearchResult {
  FacilitySet set;
  Cost value = 0;
  std::vector<Column> columns;  // harvested, deduplicated, in discovery order
};

/// Swap neighborhood, first improvement, scanned slot by slot: the facility
/// in each slot is compared against every closed facility in ascending
/// order, and an accepted swap replaces the slot content immediately. At
/// most `passes` passes; stops early after a pass without improvement.
LocalSearchResult local_search(const Instance& inst, const RankMatrix& ranks, const FacilitySet& start,
                               int passes, bool harvest);

GraspResult run_grasp(const Instance& inst, const GraspConfig& cfg);

}  // namespace domp
