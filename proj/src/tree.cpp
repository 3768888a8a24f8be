#include "twcst/tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace twcst {

Tree::Tree(std::vector<QueryClass> classes) {
  Node leaf;
  leaf.classes = std::move(classes);
  std::sort(leaf.classes.begin(), leaf.classes.end());
  nodes_.push_back(std::move(leaf));
  root_ = 0;
}

Tree::Tree(std::vector<Node> nodes, NodeId root) : nodes_(std::move(nodes)), root_(root) {
  if (root_ < 0 || static_cast<size_t>(root_) >= nodes_.size()) {
    throw Error("tree root out of range");
  }
}

std::vector<NodeId> Tree::preorder() const {
  std::vector<NodeId> order;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const Node& nd = node(id);
    if (!nd.leaf) {
      stack.push_back(nd.no);
      stack.push_back(nd.yes);
    }
  }
  return order;
}

NodeId Tree::parent_of(NodeId id) const {
  for (NodeId p : preorder()) {
    const Node& nd = node(p);
    if (!nd.leaf && (nd.yes == id || nd.no == id)) return p;
  }
  return kNoNode;
}

int Tree::internal_count() const {
  int count = 0;
  for (NodeId id : preorder()) count += node(id).leaf ? 0 : 1;
  return count;
}

int Tree::height() const {
  int best = 0;
  std::vector<std::pair<NodeId, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    const Node& nd = node(id);
    if (!nd.leaf) {
      stack.emplace_back(nd.yes, depth + 1);
      stack.emplace_back(nd.no, depth + 1);
    }
  }
  return best;
}

Tree Tree::subtree(NodeId id) const {
  TreeBuilder b;
  NodeId r = b.graft(*this, id);
  return std::move(b).build(r);
}

namespace {

bool same_structure(const Tree& a, NodeId x, const Tree& b, NodeId y) {
  std::vector<std::pair<NodeId, NodeId>> stack{{x, y}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    const Node& p = a.node(u);
    const Node& q = b.node(v);
    if (p.leaf != q.leaf) return false;
    if (p.leaf) {
      if (p.classes != q.classes) return false;
      continue;
    }
    if (p.op != q.op || p.key != q.key) return false;
    stack.emplace_back(p.yes, q.yes);
    stack.emplace_back(p.no, q.no);
  }
  return true;
}

}  // namespace

bool operator==(const Tree& a, const Tree& b) {
  return same_structure(a, a.root(), b, b.root());
}

NodeId TreeBuilder::leaf(std::vector<QueryClass> classes) {
  Node nd;
  nd.classes = std::move(classes);
  std::sort(nd.classes.begin(), nd.classes.end());
  nodes_.push_back(std::move(nd));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::internal(Op op, int key, NodeId yes, NodeId no) {
  Node nd;
  nd.leaf = false;
  nd.op = op;
  nd.key = key;
  nd.yes = yes;
  nd.no = no;
  nodes_.push_back(std::move(nd));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId TreeBuilder::graft(const Tree& from, NodeId id) {
  // Postorder copy without recursion.
  std::vector<std::pair<NodeId, bool>> stack{{id, false}};
  std::vector<NodeId> built;
  while (!stack.empty()) {
    auto [cur, expanded] = stack.back();
    stack.pop_back();
    const Node& nd = from.node(cur);
    if (nd.leaf) {
      built.push_back(leaf(nd.classes));
    } else if (!expanded) {
      stack.emplace_back(cur, true);
      stack.emplace_back(nd.no, false);
      stack.emplace_back(nd.yes, false);
    } else {
      NodeId no = built.back();
      built.pop_back();
      NodeId yes = built.back();
      built.pop_back();
      built.push_back(internal(nd.op, nd.key, yes, no));
    }
  }
  return built.back();
}

Tree TreeBuilder::build(NodeId root) && { return Tree(std::move(nodes_), root); }

NodeId classify(const Tree& tree, QueryClass q) {
  NodeId id = tree.root();
  while (!tree.node(id).leaf) {
    const Node& nd = tree.node(id);
    id = satisfies(q, nd.op, nd.key) ? nd.yes : nd.no;
  }
  return id;
}

std::vector<std::vector<int>> query_sets(const Tree& tree, const Instance& instance) {
  std::vector<std::vector<int>> sets(tree.arena().size());
  std::vector<int> all;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (instance.present_at(p)) all.push_back(p);
  }
  std::vector<std::pair<NodeId, std::vector<int>>> stack;
  stack.emplace_back(tree.root(), std::move(all));
  while (!stack.empty()) {
    auto [id, set] = std::move(stack.back());
    stack.pop_back();
    const Node& nd = tree.node(id);
    if (!nd.leaf) {
      std::vector<int> yes, no;
      for (int p : set) {
        (satisfies(QueryClass::at(p), nd.op, nd.key) ? yes : no).push_back(p);
      }
      stack.emplace_back(nd.yes, std::move(yes));
      stack.emplace_back(nd.no, std::move(no));
    }
    sets[static_cast<size_t>(id)] = std::move(set);
  }
  return sets;
}

VerifyReport verify(const Tree& tree, const Instance& instance) {
  VerifyReport report;
  const auto sets = query_sets(tree, instance);
  for (NodeId id : tree.preorder()) {
    const Node& nd = tree.node(id);
    const auto& set = sets[static_cast<size_t>(id)];
    if (nd.leaf) {
      std::vector<int> labels;
      for (QueryClass q : nd.classes) labels.push_back(q.position());
      if (set.size() > 1) {
        report.correct = false;
        std::string msg = "leaf shared by classes";
        for (int p : set) msg += " " + to_string(QueryClass::at(p));
        report.problems.push_back(msg);
      } else if (labels != set) {
        report.correct = false;
        report.problems.push_back("leaf label does not match the classes reaching it");
      }
      continue;
    }
    if (!instance.ops().contains(nd.op) || nd.key < 1 || nd.key > instance.n()) {
      report.ops_legal = false;
      report.problems.push_back("illegal comparison " + std::string(op_token(nd.op)) +
                                " K" + std::to_string(nd.key));
    }
    const auto& yes = sets[static_cast<size_t>(nd.yes)];
    const auto& no = sets[static_cast<size_t>(nd.no)];
    if (yes.size() == set.size() || no.size() == set.size()) {
      report.irreducible = false;
      report.problems.push_back("comparison " + std::string(op_token(nd.op)) + " K" +
                                std::to_string(nd.key) + " does not split its queries");
    }
  }
  return report;
}

namespace {

template <class W, class WeightFn>
W weighted_depth_sum(const Tree& tree, const Instance& instance, WeightFn weight_of) {
  if (!verify(tree, instance).correct) {
    throw UnverifiedTree("tree does not resolve every query class");
  }
  W total{};
  std::vector<std::pair<NodeId, int>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const Node& nd = tree.node(id);
    if (nd.leaf) {
      for (QueryClass q : nd.classes) {
        if (instance.present(q)) {
          W w = weight_of(q);
          w.real *= depth;
          w.eps *= depth;
          total += w;
        }
      }
    } else {
      stack.emplace_back(nd.yes, depth + 1);
      stack.emplace_back(nd.no, depth + 1);
    }
  }
  return total;
}

}  // namespace

Rational cost(const Tree& tree, const Instance& instance) {
  return weighted_depth_sum<PWeight>(tree, instance, [&](QueryClass q) {
           return PWeight(instance.weight(q));
         }).real;
}

PWeight perturbed_cost(const Tree& tree, const PerturbedInstance& perturbed) {
  return weighted_depth_sum<PWeight>(tree, perturbed.base(),
                                     [&](QueryClass q) { return perturbed.weight(q); });
}

Rational cost_by_node_weights(const Tree& tree, const Instance& instance) {
  if (!verify(tree, instance).correct) {
    throw UnverifiedTree("tree does not resolve every query class");
  }
  const auto sets = query_sets(tree, instance);
  Rational total = 0;
  for (NodeId id : tree.preorder()) {
    if (tree.node(id).leaf) continue;
    for (int p : sets[static_cast<size_t>(id)]) total += instance.weight_at(p);
  }
  return total;
}

namespace {

NodeId splice(const Tree& tree, NodeId id, const std::vector<std::vector<int>>& sets,
              TreeBuilder& out) {
  const Node& nd = tree.node(id);
  if (nd.leaf) return out.leaf(nd.classes);
  const auto& set = sets[static_cast<size_t>(id)];
  const auto& yes = sets[static_cast<size_t>(nd.yes)];
  const auto& no = sets[static_cast<size_t>(nd.no)];
  if (yes.size() == set.size()) return splice(tree, nd.yes, sets, out);
  if (no.size() == set.size()) return splice(tree, nd.no, sets, out);
  NodeId y = splice(tree, nd.yes, sets, out);
  NodeId n = splice(tree, nd.no, sets, out);
  return out.internal(nd.op, nd.key, y, n);
}

std::optional<int> single_key_leaf(const Node& nd) {
  if (nd.leaf && nd.classes.size() == 1 && nd.classes.front().is_key()) {
    return nd.classes.front().index;
  }
  return std::nullopt;
}

NodeId canonicalize(const Tree& tree, NodeId id, const Instance& instance, TreeBuilder& out) {
  const Node& nd = tree.node(id);
  if (nd.leaf) return out.leaf(nd.classes);
  auto yes_key = single_key_leaf(tree.node(nd.yes));
  auto no_key = single_key_leaf(tree.node(nd.no));
  const bool canonical = nd.op == Op::Eq && yes_key && *yes_key == nd.key;
  if (canonical || (!yes_key && !no_key)) {
    NodeId y = canonicalize(tree, nd.yes, instance, out);
    NodeId n = canonicalize(tree, nd.no, instance, out);
    return out.internal(nd.op, nd.key, y, n);
  }
  if (!instance.ops().contains(Op::Eq)) {
    throw Error("leaf parent needs an equality test but '=' is not allowed");
  }
  NodeId leaf_side = nd.yes;
  NodeId other_side = nd.no;
  int key = 0;
  if (yes_key && no_key) {
    const bool yes_heavier = instance.beta(*yes_key) > instance.beta(*no_key) ||
                             (instance.beta(*yes_key) == instance.beta(*no_key) &&
                              *yes_key < *no_key);
    key = yes_heavier ? *yes_key : *no_key;
    if (!yes_heavier) std::swap(leaf_side, other_side);
  } else if (yes_key) {
    key = *yes_key;
  } else {
    key = *no_key;
    std::swap(leaf_side, other_side);
  }
  NodeId y = out.leaf(tree.node(leaf_side).classes);
  NodeId n = canonicalize(tree, other_side, instance, out);
  return out.internal(Op::Eq, key, y, n);
}

}  // namespace

Tree make_irreducible(const Tree& tree, const Instance& instance) {
  const auto sets = query_sets(tree, instance);
  TreeBuilder out;
  NodeId root = splice(tree, tree.root(), sets, out);
  return std::move(out).build(root);
}

Tree canonicalize_leaf_parents(const Tree& tree, const Instance& instance) {
  TreeBuilder out;
  NodeId root = canonicalize(tree, tree.root(), instance, out);
  return std::move(out).build(root);
}

bool spuler_check(const Tree& tree, const Instance& instance) {
  const auto sets = query_sets(tree, instance);
  for (NodeId id : tree.preorder()) {
    const Node& nd = tree.node(id);
    if (nd.leaf || nd.op != Op::Eq) continue;
    const auto& set = sets[static_cast<size_t>(id)];
    const int own = QueryClass::key(nd.key).position();
    if (!std::binary_search(set.begin(), set.end(), own)) return false;
    for (int p : set) {
      QueryClass q = QueryClass::at(p);
      if (q.is_key() && instance.beta(q.index) > instance.beta(nd.key)) return false;
    }
  }
  return true;
}

std::string export_dot(const Tree& tree) {
  std::ostringstream out;
  out << "digraph tree {\n";
  const auto order = tree.preorder();
  std::vector<int> label(tree.arena().size(), -1);
  for (size_t i = 0; i < order.size(); ++i) label[static_cast<size_t>(order[i])] = static_cast<int>(i);
  for (NodeId id : order) {
    const Node& nd = tree.node(id);
    out << "  n" << label[static_cast<size_t>(id)] << " [label=\"";
    if (nd.leaf) {
      if (nd.classes.empty()) out << "(empty)";
      for (size_t i = 0; i < nd.classes.size(); ++i) {
        out << (i ? "," : "") << to_string(nd.classes[i]);
      }
      out << "\", shape=box];\n";
    } else {
      out << op_token(nd.op) << " K" << nd.key << "\"];\n";
    }
  }
  for (NodeId id : order) {
    const Node& nd = tree.node(id);
    if (nd.leaf) continue;
    out << "  n" << label[static_cast<size_t>(id)] << " -> n" << label[static_cast<size_t>(nd.yes)]
        << " [label=\"Y\"];\n";
    out << "  n" << label[static_cast<size_t>(id)] << " -> n" << label[static_cast<size_t>(nd.no)]
        << " [label=\"N\"];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

void write_sexpr(const Tree& tree, NodeId id, std::string& out) {
  const Node& nd = tree.node(id);
  if (nd.leaf) {
    out += "(leaf";
    for (QueryClass q : nd.classes) out += " " + to_string(q);
    out += ")";
    return;
  }
  out += "(";
  out += op_token(nd.op);
  out += " K" + std::to_string(nd.key) + " ";
  write_sexpr(tree, nd.yes, out);
  out += " ";
  write_sexpr(tree, nd.no, out);
  out += ")";
}

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  Tree parse() {
    NodeId root = node();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return std::move(builder_).build(root);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(0, "tree text at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  std::string atom() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a token");
    return std::string(text_.substr(start, pos_ - start));
  }
  QueryClass query_class(const std::string& tok) {
    auto digits = [&](std::string_view d) {
      if (d.empty() || d.size() > 9 ||
          !std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        fail("bad class '" + tok + "'");
      }
      return std::stoi(std::string(d));
    };
    std::string_view t = tok;
    if (t.starts_with("Gap")) return QueryClass::gap(digits(t.substr(3)));
    if (t.starts_with("K")) return QueryClass::key(digits(t.substr(1)));
    fail("bad class '" + tok + "'");
  }
  NodeId node() {
    expect('(');
    std::string head = atom();
    if (head == "leaf") {
      std::vector<QueryClass> classes;
      while (!peek(')')) classes.push_back(query_class(atom()));
      expect(')');
      return builder_.leaf(std::move(classes));
    }
    Op op;
    if (head == "<") {
      op = Op::Lt;
    } else if (head == "<=") {
      op = Op::Le;
    } else if (head == "=") {
      op = Op::Eq;
    } else {
      fail("unknown operator '" + head + "'");
    }
    std::string key_tok = atom();
    QueryClass key = query_class(key_tok);
    if (!key.is_key()) fail("comparison needs a key, got '" + key_tok + "'");
    NodeId yes = node();
    NodeId no = node();
    expect(')');
    return builder_.internal(op, key.index, yes, no);
  }

  std::string_view text_;
  size_t pos_ = 0;
  TreeBuilder builder_;
};

}  // namespace

std::string to_sexpr(const Tree& tree) {
  std::string out;
  write_sexpr(tree, tree.root(), out);
  return out;
}

Tree parse_sexpr(std::string_view text) { return SexprParser(text).parse(); }

}  // namespace twcst
