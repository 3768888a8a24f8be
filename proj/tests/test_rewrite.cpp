#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>

#include "support.hpp"
#include "twcst/tree.hpp"

using namespace twcst;

namespace {

constexpr std::array kRules{Rewrite::SinkEquality, Rewrite::RotateNoChildUp,
                            Rewrite::RotateYesChildUp, Rewrite::RotateThenSinkEquality,
                            Rewrite::DoubleRotation};

Rational subtree_weight(const Tree& t, NodeId id, const Instance& inst) {
  Rational w = 0;
  const Tree sub = t.subtree(id);
  for (NodeId x : sub.preorder())
    if (sub.node(x).leaf)
      for (QueryClass q : sub.node(x).classes) w += inst.weight(q);
  return w;
}

}  // namespace

TEST_CASE("rotation and its inverse") {
  Tree t = parse_sexpr("(< K1 (leaf Gap0) (< K2 (leaf K1 Gap1) (leaf K2 Gap2)))");
  Tree up = rewrite(t, Rewrite::RotateNoChildUp);
  CHECK(to_sexpr(up) == "(< K2 (< K1 (leaf Gap0) (leaf K1 Gap1)) (leaf K2 Gap2))");
  CHECK(rewrite(up, Rewrite::RotateYesChildUp) == t);
}

TEST_CASE("rotation on three internal nodes keeps every class") {
  Instance inst = parse_instance("ops: < <= =\nkeys: a b c\nbeta: 1 2 3\nalpha: 1 1 1 1\n");
  Tree t = parse_sexpr(
      "(<= K1 (= K1 (leaf K1) (leaf Gap0)) (< K3 (= K2 (leaf K2) (< K2 (leaf Gap1) (leaf Gap2)))"
      " (= K3 (leaf K3) (leaf Gap3))))");
  REQUIRE(verify(t, inst).ok());
  Tree r = rewrite(t, Rewrite::RotateNoChildUp);
  CHECK(testing::same_classification(t, r, testing::present_positions(inst)));
  // T0 goes one deeper, T11 one shallower
  CHECK(cost(r, inst) - cost(t, inst) ==
        subtree_weight(t, t.node(t.root()).yes, inst) -
            subtree_weight(t, t.node(t.node(t.root()).no).no, inst));
}

TEST_CASE("pattern mismatch") {
  Tree leaf({QueryClass::key(1)});
  for (Rewrite r : kRules) CHECK_THROWS_AS(rewrite(leaf, r), PatternMismatch);
  Tree wrong = parse_sexpr("(< K2 (leaf Gap0) (< K1 (leaf K1) (leaf Gap1)))");
  CHECK_THROWS_AS(rewrite(wrong, Rewrite::RotateNoChildUp), PatternMismatch);
}

TEST_CASE("every rule on random matching patterns") {
  Rng rng(77);
  std::map<Rewrite, int> hits;
  int attempts = 0;
  auto enough = [&] {
    for (Rewrite r : kRules)
      if (hits[r] < 100) return false;
    return true;
  };
  while (!enough() && attempts < 20000) {
    ++attempts;
    Instance inst = testing::make(rng, testing::uniform(rng, 2, 7), QueryMode::Mixed,
                                  OpSet{Op::Lt, Op::Le, Op::Eq});
    auto pos = testing::present_positions(inst);
    if (pos.size() < 3) continue;
    Tree t = testing::random_tree(rng, pos);
    for (NodeId id : t.preorder()) {
      for (Rewrite rule : kRules) {
        Tree after;
        try {
          after = rewrite_at(t, id, rule);
        } catch (const PatternMismatch&) {
          continue;
        }
        ++hits[rule];
        CHECK(testing::same_classification(t, after, pos));
        if (rule == Rewrite::DoubleRotation) {
          const Node& b = t.node(id);
          const Node& c = t.node(b.no);
          CHECK(cost(after, inst) - cost(t, inst) ==
                subtree_weight(t, b.yes, inst) - subtree_weight(t, c.yes, inst));
        }
        if (rule == Rewrite::RotateNoChildUp && id == t.root()) {
          CHECK(rewrite(after, Rewrite::RotateYesChildUp) == t);
        }
      }
    }
  }
  for (Rewrite r : kRules) {
    INFO(rewrite_name(r));
    CHECK(hits[r] >= 100);
  }
}
