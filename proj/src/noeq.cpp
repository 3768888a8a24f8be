#include "twcst/noeq.hpp"

#include <algorithm>

namespace twcst {

namespace {

bool cut_allowed(OpSet ops, int c) { return ops.contains(c % 2 == 1 ? Op::Lt : Op::Le); }

}  // namespace

NoeqReduction reduce_noeq(const Instance& instance) {
  const OpSet ops = instance.ops();
  if (ops.contains(Op::Eq)) throw Error("reduce_noeq needs an operator set without '='");
  NoeqReduction out;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (!instance.present_at(p)) continue;
    if (!out.positions.empty()) {
      const int prev = out.positions.back();
      bool ok = false;
      for (int c = p; c > prev && !ok; --c) ok = cut_allowed(ops, c);
      if (!ok) {
        throw NoCorrectTree("no allowed comparison separates " + to_string(QueryClass::at(prev)) +
                            " from " + to_string(QueryClass::at(p)));
      }
    }
    out.positions.push_back(p);
    out.problem.weights.push_back(instance.weight_at(p));
  }
  if (out.positions.empty()) throw NoCorrectTree("instance has no query classes");
  return out;
}

Tree lift_tree(const Tree& alphabetic, const NoeqReduction& reduction, const Instance& instance) {
  const Instance reduced = alphabetic_instance(reduction.problem);
  const VerifyReport report = verify(alphabetic, reduced);
  if (!report.ok()) {
    throw UnverifiedTree("alphabetic tree is not correct and irreducible: " +
                         (report.problems.empty() ? std::string("?") : report.problems.front()));
  }
  const OpSet ops = instance.ops();
  TreeBuilder out;
  std::vector<NodeId> built(alphabetic.arena().size(), kNoNode);
  auto order = alphabetic.preorder();
  std::reverse(order.begin(), order.end());
  for (NodeId id : order) {
    const Node& nd = alphabetic.node(id);
    NodeId made;
    if (nd.leaf) {
      std::vector<QueryClass> classes;
      for (QueryClass q : nd.classes) {
        classes.push_back(QueryClass::at(reduction.positions[static_cast<size_t>(q.index - 1)]));
      }
      made = out.leaf(std::move(classes));
    } else {
      const int hi = reduction.positions[static_cast<size_t>(nd.key - 1)];
      const int lo = reduction.positions[static_cast<size_t>(nd.key - 2)];
      int c = hi;
      while (c > lo && !cut_allowed(ops, c)) --c;
      const NodeId yes = built[static_cast<size_t>(nd.yes)];
      const NodeId no = built[static_cast<size_t>(nd.no)];
      made = c % 2 == 1 ? out.internal(Op::Lt, (c + 1) / 2, yes, no)
                        : out.internal(Op::Le, c / 2, yes, no);
    }
    built[static_cast<size_t>(id)] = made;
  }
  return std::move(out).build(built[static_cast<size_t>(alphabetic.root())]);
}

Tree forward_map(const Tree& tree, const NoeqReduction& reduction, const Instance& instance) {
  const VerifyReport report = verify(tree, instance);
  if (!report.correct || !report.irreducible) {
    throw UnverifiedTree("forward mapping needs a correct, irreducible tree");
  }
  const auto& pos = reduction.positions;
  TreeBuilder out;
  std::vector<NodeId> built(tree.arena().size(), kNoNode);
  auto order = tree.preorder();
  std::reverse(order.begin(), order.end());
  for (NodeId id : order) {
    const Node& nd = tree.node(id);
    NodeId made;
    if (nd.leaf) {
      std::vector<QueryClass> classes;
      for (QueryClass q : nd.classes) {
        auto it = std::lower_bound(pos.begin(), pos.end(), q.position());
        if (it == pos.end() || *it != q.position()) continue;
        classes.push_back(QueryClass::key(static_cast<int>(it - pos.begin()) + 1));
      }
      made = out.leaf(std::move(classes));
    } else {
      if (nd.op == Op::Eq) throw Error("forward mapping does not handle '=' nodes");
      const int c = cut_position(nd.op, nd.key);
      const auto j = std::lower_bound(pos.begin(), pos.end(), c) - pos.begin();
      made = out.internal(Op::Lt, static_cast<int>(j) + 1, built[static_cast<size_t>(nd.yes)],
                          built[static_cast<size_t>(nd.no)]);
    }
    built[static_cast<size_t>(id)] = made;
  }
  return std::move(out).build(built[static_cast<size_t>(tree.root())]);
}

NoeqSolution solve_noeq(const Instance& instance) {
  const NoeqReduction reduction = reduce_noeq(instance);
  const Tree alphabetic = alphabetic_tree(reduction.problem);
  Tree lifted = lift_tree(alphabetic, reduction, instance);
  Rational c = cost(lifted, instance);
  return NoeqSolution{std::move(lifted), std::move(c)};
}

}  // namespace twcst
