#pragma once

#include <vector>

#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"

namespace twcst {

class NoCorrectTree : public InfeasibleInstance {
 public:
  using InfeasibleInstance::InfeasibleInstance;
};

/// Alphabetic problem over the present query classes. `positions[j]` is the
/// class position of leaf j.
struct NoeqReduction {
  AlphabeticProblem problem;
  std::vector<int> positions;
};

/// Requires '=' not allowed. Throws NoCorrectTree when some pair of adjacent
/// present classes cannot be told apart by the allowed inequalities.
NoeqReduction reduce_noeq(const Instance& instance);

/// Relabels an alphabetic tree over the reduced leaves into a tree for the
/// instance. Each <, leaf j> becomes a cut just below class j when that
/// operator is allowed, otherwise the nearest allowed cut above class j-1.
/// Throws UnverifiedTree if `alphabetic` is not correct and irreducible for
/// the reduced problem.
Tree lift_tree(const Tree& alphabetic, const NoeqReduction& reduction, const Instance& instance);

/// The inverse direction: a correct, irreducible inequality-only tree for the
/// instance becomes an alphabetic tree over the reduced leaves.
Tree forward_map(const Tree& tree, const NoeqReduction& reduction, const Instance& instance);

struct NoeqSolution {
  Tree tree;
  Rational cost;
};

NoeqSolution solve_noeq(const Instance& instance);

}  // namespace twcst
