#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twcst/instance.hpp"
#include "twcst/pweight.hpp"
#include "twcst/tree.hpp"

namespace twcst {

/// One of the four key-interval shapes (k1,k2), [k1,k2], (k1,k2], [k1,k2),
/// with missing endpoints standing for -inf / +inf. Applied to the query
/// set of an instance it selects a contiguous run of query classes.
struct KeyInterval {
  std::optional<int> lo;  ///< key index, nullopt = -inf
  std::optional<int> hi;  ///< key index, nullopt = +inf
  bool lo_closed = false;
  bool hi_closed = false;

  static KeyInterval everything() { return {}; }

  /// First and last class position covered (last < first when empty).
  std::pair<int, int> positions(int n) const;
  /// The interval covering exactly class positions [first, last].
  static KeyInterval from_positions(int first, int last, int n);
};

/// S(I, h): the classes of I minus the h heaviest keys of I.
struct SubproblemKey {
  KeyInterval interval;
  int h = 0;
};

class InfeasibleInstance : public Error {
 public:
  using Error::Error;
};

/// Raised when a solver's own cross-checks disagree.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Index of the subproblem family of an instance: key counts, heaviest keys
/// and weights of S(I, h). Heaviness uses the perturbed order, so Top(I, h)
/// is unique.
class SubproblemSpace {
 public:
  explicit SubproblemSpace(const Instance& instance);

  /// Present keys of I.
  int key_count(const KeyInterval& interval) const;
  /// The h heaviest present keys of I, heaviest first. Throws if h exceeds
  /// the key count.
  std::vector<int> top_keys(const KeyInterval& interval, int h) const;
  PWeight weight_of(const SubproblemKey& sub) const;
  std::vector<QueryClass> classes_of(const SubproblemKey& sub) const;

 private:
  PerturbedInstance perturbed_;
};

struct Solution {
  Tree tree;
  Rational cost;
  PWeight perturbed_cost;
};

struct SolveOptions {
  /// Skip the int64 fast path and run on exact rationals throughout.
  bool force_exact = false;
};

/// Optimal two-way comparison tree over the instance's operators. Throws
/// InfeasibleInstance when no tree over the allowed operators separates
/// every query class.
Solution solve(const Instance& instance, SolveOptions options = {});

/// opt(S(I, h)) for every interval (by class positions) and h.
class CostTable {
 public:
  CostTable(int n, std::vector<std::optional<PWeight>> cells, std::vector<std::size_t> offsets);

  int n() const { return n_; }
  /// nullopt when the subproblem is infeasible.
  std::optional<PWeight> at(int first, int last, int h) const;
  std::optional<PWeight> at(const SubproblemKey& sub) const;
  std::size_t size() const { return cells_.size(); }

 private:
  int n_;
  std::vector<std::optional<PWeight>> cells_;
  std::vector<std::size_t> offsets_;
};

CostTable solve_cost_table(const Instance& instance, SolveOptions options = {});

}  // namespace twcst
