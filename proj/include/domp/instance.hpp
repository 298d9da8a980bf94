#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace domp {

/// Integer cost type. Costs, weights and objective values of integer
/// solutions are exact in this type.
using Cost = std::int64_t;

class InstanceError : public std::runtime_error {
 public:
  enum class Kind { kParse, kDimension, kValidation };

  InstanceError(Kind kind, int line, const std::string& message);
  InstanceError(Kind kind, const std::string& message)
      : InstanceError(kind, 0, message) {}

  Kind kind() const { return kind_; }
  /// 1-based line of the offending input, 0 when not tied to a file.
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

/// A DOMP instance: n points that are both clients and candidate sites,
/// p facilities to open, an n x n cost matrix (client row, facility column)
/// and n position weights. Immutable after construction.
class Instance {
 public:
  /// `costs` is row-major n x n. Throws InstanceError on invariant violation.
  Instance(int n, int p, std::vector<Cost> costs, std::vector<Cost> weights);

  int n() const { return n_; }
  int p() const { return p_; }
  Cost cost(int client, int facility) const {
    return costs_[static_cast<std::size_t>(client) * n_ + facility];
  }
  /// Weight of sorted position `position` (0-based).
  Cost weight(int position) const { return weights_[position]; }
  std::span<const Cost> costs() const { return costs_; }
  std::span<const Cost> weights() const { return weights_; }

  /// Same data with a different number of facilities.
  Instance with_p(int p) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int n_;
  int p_;
  std::vector<Cost> costs_;
  std::vector<Cost> weights_;
};

/// Position of every cost in the globally sorted cost list. Ranks are the
/// values 1..n^2; equal costs are ordered lexicographically by (client,
/// facility), so the ranking is a strict total order.
class RankMatrix {
 public:
  explicit RankMatrix(const Instance& inst);

  int n() const { return n_; }
  int rank(int client, int facility) const {
    return ranks_[static_cast<std::size_t>(client) * n_ + facility];
  }
  /// (client, facility) holding rank `r` (1-based).
  std::pair<int, int> pair_at(int r) const { return by_rank_[r - 1]; }
  std::span<const int> ranks() const { return ranks_; }

 private:
  int n_;
  std::vector<int> ranks_;
  std::vector<std::pair<int, int>> by_rank_;
};

inline RankMatrix compute_ranks(const Instance& inst) { return RankMatrix(inst); }

/// Random instance: n points uniform in [0,400]^2, rounded Euclidean costs,
/// diagonal set to the smallest off-diagonal cost, weights uniform integers
/// in [floor(n/4), n]. Pure function of (n, p, seed).
Instance generate(int n, int p, std::uint64_t seed);

/// Text format:
///   DOMP 1
///   n p
///   n lines of n costs
///   one line of n weights
Instance parse_instance(std::istream& in);
Instance load_instance(const std::filesystem::path& path);
void write_instance(const Instance& inst, std::ostream& out);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// The 3-point instance used throughout the documentation and tests:
/// C = [[1,3,6],[3,1,8],[6,8,1]], weights (4,2,1), p = 2.
Instance example_instance();

}  // namespace domp
