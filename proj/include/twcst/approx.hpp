#pragma once

#include <cstdint>
#include <vector>

#include "twcst/instance.hpp"
#include "twcst/tree.hpp"

namespace twcst {

/// Leaf weights of an alphabetic tree, in the order the leaves must keep.
struct AlphabeticProblem {
  std::vector<Rational> weights;
};

/// Leaf depths of an optimal alphabetic tree (Hu-Tucker). Works on int64 or
/// exact weights; both give the same depths for proportional inputs.
std::vector<int> alphabetic_depths(const std::vector<std::int64_t>& weights);
std::vector<int> alphabetic_depths(const std::vector<Rational>& weights);

/// Builds the tree with the given leaf depths (which must come from a valid
/// alphabetic tree). Leaf i (0-based) is labeled Key(i+1) and every internal
/// node is <, K_j> with j the first leaf of its no-subtree.
Tree tree_from_depths(const std::vector<int>& depths);

/// Optimal alphabetic tree: sum of weight * depth is minimum over all binary
/// trees with the leaves in order. Read as a tree over a successful-only
/// instance whose keys are the leaves.
Tree alphabetic_tree(const AlphabeticProblem& problem);

/// The successful-only instance with C = {<} that alphabetic trees solve.
Instance alphabetic_instance(const AlphabeticProblem& problem);

/// Shannon entropy in bits of the normalized class weights; 0 log 0 = 0.
double entropy(const Instance& instance);

class EqualityOnly : public Error {
 public:
  EqualityOnly() : Error("only '=' is allowed; use equality_chain") {}
};

struct ApproxResult {
  Tree tree;
  Rational cost;
  /// Weights of the reduced successful-only instance, one per key.
  AlphabeticProblem reduced;
  Rational reduced_cost;
};

/// Alphabetic tree over merged key/gap weights, each leaf then expanded by
/// at most two comparisons. Cost is within 3 of optimal for normalized
/// weights. Throws EqualityOnly when C = {=} and InfeasibleInstance when a
/// leaf cannot be split with the allowed operators.
ApproxResult approx3(const Instance& instance);

/// Equality tests in order of decreasing beta (lower index first on ties),
/// ending in the one non-key class if present. Optimal when C = {=}; throws
/// InfeasibleInstance when more than one non-key class is present.
Tree equality_chain(const Instance& instance);

}  // namespace twcst
