#include "twcst/tree.hpp"

namespace twcst {

std::string_view rewrite_name(Rewrite rule) {
  switch (rule) {
    case Rewrite::SinkEquality: return "sink-equality";
    case Rewrite::RotateNoChildUp: return "rotate-no-child-up";
    case Rewrite::RotateYesChildUp: return "rotate-yes-child-up";
    case Rewrite::RotateThenSinkEquality: return "rotate-then-sink-equality";
    case Rewrite::DoubleRotation: return "double-rotation";
  }
  return "?";
}

namespace {

class Rewriter {
 public:
  Rewriter(const Tree& tree, Rewrite rule) : rule_(rule), nodes_(tree.arena()) {}

  NodeId apply(NodeId at) {
    switch (rule_) {
      case Rewrite::SinkEquality: return sink_equality(at);
      case Rewrite::RotateNoChildUp: return rotate_no_child_up(at);
      case Rewrite::RotateYesChildUp: return rotate_yes_child_up(at);
      case Rewrite::RotateThenSinkEquality: return rotate_then_sink(at);
      case Rewrite::DoubleRotation: return double_rotation(at);
    }
    fail("unknown rule");
  }

  std::vector<Node> take() { return std::move(nodes_); }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw PatternMismatch(std::string(rewrite_name(rule_)) + ": " + why);
  }
  const Node& at(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
  const Node& inequality(NodeId id, const char* role) const {
    const Node& nd = at(id);
    if (nd.leaf || nd.op == Op::Eq) fail(std::string(role) + " must be an inequality node");
    return nd;
  }
  const Node& equality_over_leaf(NodeId id) const {
    const Node& nd = at(id);
    if (nd.leaf || nd.op != Op::Eq) fail("root must be an equality node");
    if (!at(nd.yes).leaf) fail("equality yes-child must be a leaf");
    return nd;
  }
  NodeId make(Op op, int key, NodeId yes, NodeId no) {
    Node nd;
    nd.leaf = false;
    nd.op = op;
    nd.key = key;
    nd.yes = yes;
    nd.no = no;
    nodes_.push_back(std::move(nd));
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  static int cut(const Node& nd) { return cut_position(nd.op, nd.key); }

  // <=,a>(leaf, <op,b>(T0,T1)): the equality moves to whichever side K_a falls.
  NodeId sink_equality(NodeId root) {
    const Node eq = equality_over_leaf(root);
    const Node b = inequality(eq.no, "no-child");
    if (satisfies(QueryClass::key(eq.key), b.op, b.key)) {
      NodeId inner = make(Op::Eq, eq.key, eq.yes, b.yes);
      return make(b.op, b.key, inner, b.no);
    }
    NodeId inner = make(Op::Eq, eq.key, eq.yes, b.no);
    return make(b.op, b.key, b.yes, inner);
  }

  NodeId rotate_no_child_up(NodeId root) {
    const Node b = inequality(root, "root");
    const Node c = inequality(b.no, "no-child");
    if (cut(b) > cut(c)) fail("no-child cut lies left of the root cut");
    NodeId lower = make(b.op, b.key, b.yes, c.yes);
    return make(c.op, c.key, lower, c.no);
  }

  NodeId rotate_yes_child_up(NodeId root) {
    const Node c = inequality(root, "root");
    const Node b = inequality(c.yes, "yes-child");
    if (cut(b) > cut(c)) fail("yes-child cut lies right of the root cut");
    NodeId lower = make(c.op, c.key, b.no, c.no);
    return make(b.op, b.key, b.yes, lower);
  }

  NodeId rotate_then_sink(NodeId root) {
    const Node eq = equality_over_leaf(root);
    const Node b = inequality(eq.no, "no-child");
    const Node c = inequality(b.no, "no-grandchild");
    if (cut(b) > cut(c)) fail("grandchild cut lies left of the child cut");
    if (satisfies(QueryClass::key(eq.key), c.op, c.key)) {
      fail("equality key must fail the grandchild comparison");
    }
    NodeId left = make(b.op, b.key, b.yes, c.yes);
    NodeId right = make(Op::Eq, eq.key, eq.yes, c.no);
    return make(c.op, c.key, left, right);
  }

  NodeId double_rotation(NodeId root) {
    const Node b = inequality(root, "root");
    const Node c = inequality(b.no, "no-child");
    const Node d = inequality(c.yes, "no-child's yes-child");
    if (cut(d) > cut(c)) fail("inner cut lies right of the middle cut");
    if (cut(b) > cut(d)) fail("root cut lies right of the inner cut");
    NodeId left = make(b.op, b.key, b.yes, d.yes);
    NodeId right = make(c.op, c.key, d.no, c.no);
    return make(d.op, d.key, left, right);
  }

  Rewrite rule_;
  std::vector<Node> nodes_;
};

}  // namespace

Tree rewrite_at(const Tree& tree, NodeId at, Rewrite rule) {
  const NodeId parent = tree.parent_of(at);
  if (parent == kNoNode && at != tree.root()) throw PatternMismatch("node is not in the tree");
  Rewriter rw(tree, rule);
  NodeId replacement = rw.apply(at);
  auto nodes = rw.take();
  NodeId root = tree.root();
  if (parent == kNoNode) {
    root = replacement;
  } else {
    Node& p = nodes[static_cast<size_t>(parent)];
    (p.yes == at ? p.yes : p.no) = replacement;
  }
  return Tree(std::move(nodes), root);
}

Tree rewrite(const Tree& tree, Rewrite rule) { return rewrite_at(tree, tree.root(), rule); }

}  // namespace twcst
