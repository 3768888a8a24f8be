#include <algorithm>
#include <cmath>

#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"

namespace twcst {

double entropy(const Instance& instance) {
  const Rational total = instance.total_weight();
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (int p = 0; p < instance.class_count(); ++p) {
    const Rational& w = instance.weight_at(p);
    if (w <= 0) continue;
    const double x = to_double(w / total);
    h -= x * std::log2(x);
  }
  return h;
}

namespace {

bool cut_allowed(OpSet ops, int c) { return ops.contains(c % 2 == 1 ? Op::Lt : Op::Le); }

NodeId cut_node(TreeBuilder& out, int c, NodeId yes, NodeId no) {
  return c % 2 == 1 ? out.internal(Op::Lt, (c + 1) / 2, yes, no)
                    : out.internal(Op::Le, c / 2, yes, no);
}

// Resolves the (at most three) classes of an augmented leaf.
NodeId separate(TreeBuilder& out, const Instance& instance, int lo, int hi) {
  std::vector<int> present;
  for (int p = lo; p <= hi; ++p) {
    if (instance.present_at(p)) present.push_back(p);
  }
  const OpSet ops = instance.ops();
  auto leaf = [&](int p) { return out.leaf({QueryClass::at(p)}); };
  if (present.size() <= 1) {
    std::vector<QueryClass> classes;
    for (int p : present) classes.push_back(QueryClass::at(p));
    return out.leaf(std::move(classes));
  }
  if (present.size() == 2) {
    const int x = present[0];
    const int y = present[1];
    if (ops.contains(Op::Eq) && (x % 2 == 1 || y % 2 == 1)) {
      const int key = x % 2 == 1 ? x : y;
      const int other = key == x ? y : x;
      return out.internal(Op::Eq, QueryClass::at(key).index, leaf(key), leaf(other));
    }
    for (int c = y; c > x; --c) {
      if (cut_allowed(ops, c)) return cut_node(out, c, leaf(x), leaf(y));
    }
  } else {
    const int x = present[0];
    const int z = present[2];
    if (cut_allowed(ops, present[1])) {
      NodeId left = leaf(x);
      return cut_node(out, present[1], left, separate(out, instance, present[1], hi));
    }
    if (cut_allowed(ops, z)) {
      NodeId left = separate(out, instance, lo, present[1]);
      return cut_node(out, z, left, leaf(z));
    }
  }
  throw InfeasibleInstance("allowed operators {" + ops.to_string() + "} cannot separate " +
                           to_string(QueryClass::at(present[0])) + " from " +
                           to_string(QueryClass::at(present[1])));
}

}  // namespace

ApproxResult approx3(const Instance& instance) {
  const OpSet ops = instance.ops();
  if (!ops.has_inequality()) throw EqualityOnly();
  const bool lt = ops.contains(Op::Lt);
  const int n = instance.n();

  AlphabeticProblem reduced;
  for (int i = 1; i <= n; ++i) {
    reduced.weights.push_back(lt ? instance.beta(i) + instance.alpha(i)
                                 : instance.alpha(i - 1) + instance.beta(i));
  }
  if (lt) {
    reduced.weights.front() += instance.alpha(0);
  } else {
    reduced.weights.back() += instance.alpha(n);
  }
  const Tree skeleton = alphabetic_tree(reduced);

  // Leaf i of the skeleton holds K_i and one neighbouring gap; the end leaf
  // also holds the outer gap.
  TreeBuilder out;
  std::vector<NodeId> built(skeleton.arena().size(), kNoNode);
  auto order = skeleton.preorder();
  std::reverse(order.begin(), order.end());
  for (NodeId id : order) {
    const Node& nd = skeleton.node(id);
    if (nd.leaf) {
      const int i = nd.classes.front().index;
      int lo = lt ? 2 * i - 1 : 2 * i - 2;
      int hi = lt ? 2 * i : 2 * i - 1;
      if (lt && i == 1) lo = 0;
      if (!lt && i == n) hi = 2 * n;
      built[static_cast<size_t>(id)] = separate(out, instance, lo, hi);
    } else {
      const NodeId yes = built[static_cast<size_t>(nd.yes)];
      const NodeId no = built[static_cast<size_t>(nd.no)];
      built[static_cast<size_t>(id)] = lt ? out.internal(Op::Lt, nd.key, yes, no)
                                          : out.internal(Op::Le, nd.key - 1, yes, no);
    }
  }
  Tree full = std::move(out).build(built[static_cast<size_t>(skeleton.root())]);
  full = make_irreducible(full, instance);
  Rational c = cost(full, instance);
  Rational reduced_cost = cost(skeleton, alphabetic_instance(reduced));
  return ApproxResult{std::move(full), std::move(c), std::move(reduced), std::move(reduced_cost)};
}

Tree equality_chain(const Instance& instance) {
  std::vector<int> keys;
  std::vector<int> others;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (!instance.present_at(p)) continue;
    (p % 2 == 1 ? keys : others).push_back(p);
  }
  if (others.size() > 1) {
    throw InfeasibleInstance("equality tests alone cannot separate two non-key classes");
  }
  if (keys.size() + others.size() > 1 && !instance.ops().contains(Op::Eq)) {
    throw InfeasibleInstance("equality chain needs '='");
  }
  std::stable_sort(keys.begin(), keys.end(), [&](int a, int b) {
    return instance.weight_at(a) > instance.weight_at(b);
  });
  TreeBuilder out;
  NodeId tail;
  size_t tested = keys.size();
  if (!others.empty()) {
    tail = out.leaf({QueryClass::at(others.front())});
  } else if (!keys.empty()) {
    tail = out.leaf({QueryClass::at(keys.back())});
    --tested;
  } else {
    tail = out.leaf({});
  }
  for (size_t t = tested; t-- > 0;) {
    const QueryClass key = QueryClass::at(keys[t]);
    tail = out.internal(Op::Eq, key.index, out.leaf({key}), tail);
  }
  return std::move(out).build(tail);
}

}  // namespace twcst
