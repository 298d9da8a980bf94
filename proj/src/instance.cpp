#include "domp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "domp/rng.hpp"

namespace domp {

namespace {

std::string format_message(int line, const std::string& message) {
  if (line <= 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

InstanceError::InstanceError(Kind kind, int line, const std::string& message)
    : std::runtime_error(format_message(line, message)), kind_(kind), line_(line) {}

Instance::Instance(int n, int p, std::vector<Cost> costs, std::vector<Cost> weights)
    : n_(n), p_(p), costs_(std::move(costs)), weights_(std::move(weights)) {
  using K = InstanceError::Kind;
  if (n_ < 1) throw InstanceError(K::kValidation, "n must be positive");
  if (p_ < 1 || p_ > n_) throw InstanceError(K::kValidation, "p must satisfy 1 <= p <= n");
  if (costs_.size() != static_cast<std::size_t>(n_) * n_)
    throw InstanceError(K::kDimension, "cost matrix must be n x n");
  if (weights_.size() != static_cast<std::size_t>(n_))
    throw InstanceError(K::kDimension, "weight vector must have n entries");
  for (Cost c : costs_)
    if (c < 0) throw InstanceError(K::kValidation, "negative cost");
  for (Cost w : weights_)
    if (w < 0) throw InstanceError(K::kValidation, "negative weight");
}

Instance Instance::with_p(int p) const { return Instance(n_, p, costs_, weights_); }

RankMatrix::RankMatrix(const Instance& inst) : n_(inst.n()) {
  const auto total = static_cast<std::size_t>(n_) * n_;
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  // Row-major index order is exactly the lexicographic (i, j) tie-break.
  auto costs = inst.costs();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[a] < costs[b]; });
  ranks_.assign(total, 0);
  by_rank_.resize(total);
  for (std::size_t r = 0; r < total; ++r) {
    ranks_[order[r]] = static_cast<int>(r) + 1;
    by_rank_[r] = {order[r] / n_, order[r] % n_};
  }
}

Instance generate(int n, int p, std::uint64_t seed) {
  if (n < 1) throw InstanceError(InstanceError::Kind::kValidation, "n must be positive");
  if (p < 1 || p > n)
    throw InstanceError(InstanceError::Kind::kValidation, "p must satisfy 1 <= p <= n");
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = 400.0 * rng.uniform01();
    ys[i] = 400.0 * rng.uniform01();
  }
  std::vector<Cost> costs(static_cast<std::size_t>(n) * n, 0);
  Cost off_min = std::numeric_limits<Cost>::max();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      const Cost c = std::llround(d);
      costs[static_cast<std::size_t>(i) * n + j] = c;
      off_min = std::min(off_min, c);
    }
  }
  if (n == 1) off_min = 0;
  for (int i = 0; i < n; ++i) costs[static_cast<std::size_t>(i) * n + i] = off_min;

  std::vector<Cost> weights(n);
  for (auto& w : weights) w = rng.uniform_int(n / 4, n);
  return Instance(n, p, std::move(costs), std::move(weights));
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line split into integers; throws on EOF or junk.
  std::vector<Cost> next(const char* what) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return parse(text, what);
    }
    throw InstanceError(InstanceError::Kind::kDimension, line_ + 1,
                        std::string("unexpected end of file, expected ") + what);
  }

  std::string next_raw() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return text;
    }
    throw InstanceError(InstanceError::Kind::kParse, line_ + 1, "empty file");
  }

  bool has_more() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  int line() const { return line_; }

 private:
  std::vector<Cost> parse(const std::string& text, const char* what) {
    std::istringstream ss(text);
    std::vector<Cost> values;
    std::string token;
    while (ss >> token) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size())
        throw InstanceError(InstanceError::Kind::kParse, line_,
                            "invalid integer '" + token + "' in " + what);
      values.push_back(v);
    }
    return values;
  }

  std::istream& in_;
  int line_ = 0;
};

}  // namespace

Instance parse_instance(std::istream& in) {
  using K = InstanceError::Kind;
  LineReader reader(in);
  std::string magic = reader.next_raw();
  while (!magic.empty() && (magic.back() == '\r' || magic.back() == ' ')) magic.pop_back();
  if (magic != "DOMP 1") throw InstanceError(K::kParse, reader.line(), "expected header 'DOMP 1'");

  auto header = reader.next("'n p'");
  if (header.size() != 2) throw InstanceError(K::kParse, reader.line(), "expected 'n p'");
  const Cost n = header[0];
  const Cost p = header[1];
  if (n < 1 || n > 100000) throw InstanceError(K::kValidation, reader.line(), "n out of range");
  if (p < 1 || p > n) throw InstanceError(K::kValidation, reader.line(), "p must satisfy 1 <= p <= n");

  std::vector<Cost> costs;
  costs.reserve(static_cast<std::size_t>(n * n));
  for (Cost i = 0; i < n; ++i) {
    auto row = reader.next("cost row");
    if (static_cast<Cost>(row.size()) != n)
      throw InstanceError(K::kDimension, reader.line(),
                          "cost row has " + std::to_string(row.size()) + " entries, expected " +
                              std::to_string(n));
    for (Cost c : row)
      if (c < 0) throw InstanceError(K::kValidation, reader.line(), "negative cost");
    costs.insert(costs.end(), row.begin(), row.end());
  }
  auto weights = reader.next("weight line");
  if (static_cast<Cost>(weights.size()) != n)
    throw InstanceError(K::kDimension, reader.line(), "weight line must have n entries");
  for (Cost w : weights)
    if (w < 0) throw InstanceError(K::kValidation, reader.line(), "negative weight");
  if (reader.has_more()) throw InstanceError(K::kDimension, reader.line(), "trailing data");
  return Instance(static_cast<int>(n), static_cast<int>(p), std::move(costs), std::move(weights));
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError(InstanceError::Kind::kParse, "cannot open " + path.string());
  return parse_instance(in);
}

void write_instance(const Instance& inst, std::ostream& out) {
  const int n = inst.n();
  out << "DOMP 1\n" << n << ' ' << inst.p() << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << inst.cost(i, j);
    out << '\n';
  }
  for (int k = 0; k < n; ++k) out << (k ? " " : "") << inst.weight(k);
  out << '\n';
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_instance(inst, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Instance example_instance() {
  return Instance(3, 2, {1, 3, 6, 3, 1, 8, 6, 8, 1}, {4, 2, 1});
}

}  // namespace domp
