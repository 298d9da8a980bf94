#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "domp/instance.hpp"

namespace domp {

/// Sorted set of distinct 0-based facility indices.
class FacilitySet {
 public:
  FacilitySet() = default;
  FacilitySet(std::initializer_list<int> items);
  explicit FacilitySet(std::vector<int> items);

  const std::vector<int>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(int j) const;
  void insert(int j);
  void erase(int j);
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const FacilitySet&, const FacilitySet&) = default;
  friend auto operator<=>(const FacilitySet&, const FacilitySet&) = default;

 private:
  std::vector<int> items_;
};

/// (client, position), both 0-based.
struct Couple {
  int client = 0;
  int position = 0;

  friend bool operator==(const Couple&, const Couple&) = default;
  friend auto operator<=>(const Couple&, const Couple&) = default;
};

/// Master variable y_S^j: facility j with couples S sorted by position.
struct Column {
  int facility = 0;
  std::vector<Couple> couples;
  Cost cost = 0;

  /// Identity ignores cost (it is a function of facility and couples).
  bool same_key(const Column& other) const {
    return facility == other.facility && couples == other.couples;
  }
};

struct ColumnKeyHash {
  std::size_t operator()(const Column& c) const;
};
struct ColumnKeyEqual {
  bool operator()(const Column& a, const Column& b) const { return a.same_key(b); }
};

/// Sum of weight(k) * cost(i, facility) over the couples.
Cost column_cost(const Instance& inst, int facility, const std::vector<Couple>& couples);

/// Builds a column, sorting couples by position and filling the cost.
Column make_column(const Instance& inst, int facility, std::vector<Couple> couples);

/// Checks the column invariants: distinct clients and positions, ranks
/// strictly increasing with position, stored cost correct. On failure
/// returns false and writes a reason when `why` is non-null.
bool is_valid_column(const Instance& inst, const RankMatrix& ranks, const Column& col,
                     std::string* why = nullptr);

struct Allocation {
  std::vector<Cost> costs;   // c_i(J)
  std::vector<int> servers;  // facility attaining it
};

/// Cheapest open facility per client; ties go to smaller rank, then smaller j.
Allocation allocation_costs(const Instance& inst, const RankMatrix& ranks, const FacilitySet& open);

/// Ordered median value z(J). Requires |J| = p.
Cost ordered_value(const Instance& inst, const FacilitySet& open);

/// z(J) for any nonempty J (no cardinality check). Used by greedy steps.
Cost ordered_value_any(const Instance& inst, const FacilitySet& open);

/// Ordered median value of a vector of allocation costs.
Cost ordered_value_of_costs(const Instance& inst, std::vector<Cost> costs);

/// Columns describing the integer solution J: clients sorted by the rank of
/// their allocation, positions assigned in that order, grouped by server.
std::vector<Column> solution_to_columns(const Instance& inst, const RankMatrix& ranks,
                                        const FacilitySet& open);

std::string to_string(const FacilitySet& set);  // 1-based, "{1,3}"
std::string to_string(const Column& col);       // 1-based, "j=1 {(1,1),(2,3)}"

}  // namespace domp
