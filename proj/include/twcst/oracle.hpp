#pragma once

#include <cstddef>
#include <vector>

#include "twcst/gbst.hpp"
#include "twcst/instance.hpp"
#include "twcst/tree.hpp"

namespace twcst {

/// Keys accepted by the exponential oracles.
inline constexpr int kBruteLimit = 12;

struct OracleSolution {
  Tree tree;
  Rational cost;
};

/// Minimum cost over every tree with operators in C, memoized over the sets
/// of classes reaching a node. Equality may test any key still possible.
/// Throws InfeasibleInstance when no tree exists, Error above kBruteLimit.
OracleSolution brute_2wcst(const Instance& instance);

/// Minimum split-tree cost over every choice of tied heaviest key and split.
GbstSolution brute_split(const Instance& instance);

/// Minimum GBST cost: any equality key and any split key at every node.
GbstSolution brute_gbst(const Instance& instance);

/// Every correct, irreducible tree for the instance. Throws Error once more
/// than `limit` trees would be produced.
std::vector<Tree> enumerate_trees(const Instance& instance, std::size_t limit = 1000000);

}  // namespace twcst
