#pragma once

#include <random>
#include <vector>

#include "twcst/instance.hpp"
#include "twcst/random_instance.hpp"
#include "twcst/tree.hpp"

namespace twcst::testing {

inline OpSet random_ops(Rng& rng) {
  std::uniform_int_distribution<int> d(1, 7);
  return OpSet::from_bits(static_cast<std::uint8_t>(d(rng)));
}

inline OpSet random_inequality_ops(Rng& rng) {
  std::uniform_int_distribution<int> d(1, 3);
  return OpSet::from_bits(static_cast<std::uint8_t>(d(rng)));
}

inline Instance make(Rng& rng, int n, QueryMode mode, OpSet ops, int distinct = 4) {
  RandomSpec spec;
  spec.n = n;
  spec.queries = mode;
  spec.ops = ops;
  spec.distinct_weights = distinct;
  return random_instance(rng, spec);
}

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<int> present_positions(const Instance& inst) {
  std::vector<int> out;
  for (int p = 0; p < inst.class_count(); ++p)
    if (inst.present_at(p)) out.push_back(p);
  return out;
}

// the leaf reached by q holds the same class list in both trees
inline bool same_classification(const Tree& a, const Tree& b, const std::vector<int>& positions) {
  for (int p : positions) {
    QueryClass q = QueryClass::at(p);
    if (a.node(classify(a, q)).classes != b.node(classify(b, q)).classes) return false;
  }
  return true;
}

// random correct tree over the given sorted positions, any operator
inline NodeId random_tree(Rng& rng, TreeBuilder& out, std::vector<int> set) {
  if (set.size() == 1) return out.leaf({QueryClass::at(set[0])});
  std::vector<int> keys;
  for (int p : set)
    if (p % 2 == 1) keys.push_back(p);
  if (!keys.empty() && uniform(rng, 0, 2) == 0) {
    const int p = keys[static_cast<size_t>(uniform(rng, 0, static_cast<int>(keys.size()) - 1))];
    std::vector<int> rest;
    for (int x : set)
      if (x != p) rest.push_back(x);
    NodeId yes = out.leaf({QueryClass::at(p)});
    NodeId no = random_tree(rng, out, rest);
    return out.internal(Op::Eq, (p + 1) / 2, yes, no);
  }
  // cut c sends positions < c to yes; pick c between two neighbours
  const int split = uniform(rng, 1, static_cast<int>(set.size()) - 1);
  const int c = uniform(rng, set[static_cast<size_t>(split - 1)] + 1, set[static_cast<size_t>(split)]);
  std::vector<int> left(set.begin(), set.begin() + split);
  std::vector<int> right(set.begin() + split, set.end());
  NodeId yes = random_tree(rng, out, left);
  NodeId no = random_tree(rng, out, right);
  if (c % 2 == 1) return out.internal(Op::Lt, (c + 1) / 2, yes, no);
  return out.internal(Op::Le, c / 2, yes, no);
}

inline Tree random_tree(Rng& rng, const std::vector<int>& set) {
  TreeBuilder out;
  NodeId root = random_tree(rng, out, set);
  return std::move(out).build(root);
}

}  // namespace twcst::testing
