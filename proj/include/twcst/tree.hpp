#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twcst/instance.hpp"
#include "twcst/pweight.hpp"

namespace twcst {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// A node of a two-way comparison search tree. Internal nodes compare the
/// query against `key` with `op`; queries that satisfy the comparison go to
/// `yes`. Leaves record the query classes they resolve.
struct Node {
  bool leaf = true;
  Op op = Op::Lt;
  int key = 0;
  NodeId yes = kNoNode;
  NodeId no = kNoNode;
  std::vector<QueryClass> classes;
};

/// Smallest class position that fails the comparison, for inequalities: the
/// yes branch of <op, key> receives exactly the positions below the cut.
constexpr int cut_position(Op op, int key) { return op == Op::Lt ? 2 * key - 1 : 2 * key; }

/// True when a query of class `q` takes the yes branch of <op, key>.
constexpr bool satisfies(QueryClass q, Op op, int key) {
  if (op == Op::Eq) return q == QueryClass::key(key);
  return q.position() < cut_position(op, key);
}

/// Immutable search tree stored as a node arena. Node ids are stable for the
/// lifetime of the value; rewrites reuse the ids of untouched subtrees.
class Tree {
 public:
  /// A single leaf holding `classes`.
  explicit Tree(std::vector<QueryClass> classes = {});
  Tree(std::vector<Node> nodes, NodeId root);

  NodeId root() const { return root_; }
  const Node& node(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
  const std::vector<Node>& arena() const { return nodes_; }

  /// Ids reachable from the root, in preorder.
  std::vector<NodeId> preorder() const;
  /// Parent of `id` within the reachable tree, or kNoNode for the root.
  NodeId parent_of(NodeId id) const;
  int internal_count() const;
  int height() const;

  /// Copy of the subtree rooted at `id` with unreachable nodes dropped.
  Tree subtree(NodeId id) const;

  /// Structural equality of the reachable trees (ids ignored).
  friend bool operator==(const Tree& a, const Tree& b);

 private:
  std::vector<Node> nodes_;
  NodeId root_ = 0;
};

/// Bottom-up construction of trees.
class TreeBuilder {
 public:
  NodeId leaf(std::vector<QueryClass> classes);
  NodeId internal(Op op, int key, NodeId yes, NodeId no);
  /// Copies the subtree of `from` rooted at `id` into this builder.
  NodeId graft(const Tree& from, NodeId id);
  Tree build(NodeId root) &&;

 private:
  std::vector<Node> nodes_;
};

/// Leaf reached by a query of class `q`.
NodeId classify(const Tree& tree, QueryClass q);

struct VerifyReport {
  bool correct = true;      ///< every present class ends at its own leaf
  bool irreducible = true;  ///< no node has the same query set as its parent
  bool ops_legal = true;    ///< operators allowed, keys in range
  std::vector<std::string> problems;

  bool ok() const { return correct && irreducible && ops_legal; }
};

VerifyReport verify(const Tree& tree, const Instance& instance);

/// Raised when an operation needs a correct tree and gets something else.
class UnverifiedTree : public Error {
 public:
  using Error::Error;
};

/// Expected number of comparisons: sum over present classes of weight times
/// the number of internal nodes on its path. Requires a correct tree.
Rational cost(const Tree& tree, const Instance& instance);
/// Same cost accounted as the sum of node weights over internal nodes.
Rational cost_by_node_weights(const Tree& tree, const Instance& instance);
/// Cost under the perturbed weights.
PWeight perturbed_cost(const Tree& tree, const PerturbedInstance& perturbed);

/// Present classes reaching each node, indexed by node id (positions, sorted).
std::vector<std::vector<int>> query_sets(const Tree& tree, const Instance& instance);

/// Splices out every node that passes its whole query set to one child.
Tree make_irreducible(const Tree& tree, const Instance& instance);

/// Rewrites the parent of every single-key leaf into <=, K> with the leaf as
/// yes-child. When both children of a node are key leaves, the heavier key
/// (lower index on ties) is tested. Throws if `=` is not allowed and a
/// rewrite is needed.
Tree canonicalize_leaf_parents(const Tree& tree, const Instance& instance);

/// True when every equality node tests a key of maximum beta among the keys
/// in its query set.
bool spuler_check(const Tree& tree, const Instance& instance);

/// Local rewrites that preserve the leaf reached by every query.
enum class Rewrite {
  SinkEquality,            ///< <=,a>(leaf, <op,b>(T0,T1)) -> equality moved below <op,b>
  RotateNoChildUp,         ///< <op,b>(T0, <op',c>(T10,T11)) -> <op',c>(<op,b>(T0,T10), T11)
  RotateYesChildUp,        ///< inverse of RotateNoChildUp
  RotateThenSinkEquality,  ///< RotateNoChildUp below the equality, then SinkEquality
  DoubleRotation,          ///< <op,b>(T0, <op',c>(<op'',d>(T100,T101), T11)) -> <op'',d>(<op,b>(T0,T100), <op',c>(T101,T11))
};

std::string_view rewrite_name(Rewrite rule);

class PatternMismatch : public Error {
 public:
  using Error::Error;
};

/// Applies `rule` at the root of `tree`.
Tree rewrite(const Tree& tree, Rewrite rule);
/// Applies `rule` at node `at`; the rest of the tree (and its ids) is kept.
Tree rewrite_at(const Tree& tree, NodeId at, Rewrite rule);

/// Graphviz digraph: internal nodes "op Ki", edges "Y"/"N", leaves by class.
std::string export_dot(const Tree& tree);

/// Compact text form, e.g. `(< K2 (leaf Gap0) (= K2 (leaf K2) (leaf Gap2)))`.
std::string to_sexpr(const Tree& tree);
Tree parse_sexpr(std::string_view text);

}  // namespace twcst
