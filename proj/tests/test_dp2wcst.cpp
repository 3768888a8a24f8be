#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"
#include "twcst/oracle.hpp"

using namespace twcst;

namespace {

// same keys, only `classes` queried
Instance restrict_to(const Instance& inst, const std::vector<QueryClass>& classes) {
  std::vector<Rational> beta(inst.beta().size(), Rational(0));
  std::vector<Rational> alpha(inst.alpha().size(), Rational(0));
  for (QueryClass q : classes) {
    if (q.is_key()) beta[static_cast<size_t>(q.index - 1)] = inst.weight(q);
    else alpha[static_cast<size_t>(q.index)] = inst.weight(q);
  }
  return Instance(inst.keys(), inst.ops(), beta, alpha, classes, inst.key_type());
}

KeyInterval closed(int lo, int hi) {
  KeyInterval k;
  k.lo = lo;
  k.hi = hi;
  k.lo_closed = k.hi_closed = true;
  return k;
}

}  // namespace

TEST_CASE("single key") {
  for (OpSet ops : {OpSet{Op::Lt}, OpSet{Op::Le}, OpSet{Op::Eq}, OpSet{Op::Lt, Op::Eq}}) {
    Solution s = solve(parse_instance("ops: " + ops.to_string() + "\nkeys: a\nbeta: 3\n"));
    CHECK(s.cost == 0);
    CHECK(s.tree.node(s.tree.root()).leaf);
  }
}

TEST_CASE("uniform successful four keys, < and =") {
  Instance inst = parse_instance("ops: < =\nkeys: a b c d\nbeta: 1 1 1 1\n");
  Solution s = solve(inst);
  CHECK(s.cost == brute_2wcst(inst).cost);
  CHECK(verify(s.tree, inst).ok());
}

TEST_CASE("uniform standard three keys, all operators") {
  Instance inst = parse_instance("ops: < <= =\nkeys: H O W\nbeta: 1 1 1\nalpha: 1 1 1 1\n");
  Solution s = solve(inst);
  CHECK(s.cost == brute_2wcst(inst).cost);
  CHECK(spuler_check(s.tree, inst));
  CHECK(verify(s.tree, inst).ok());
  CHECK(cost(s.tree, inst) == s.cost);
  CHECK(s.perturbed_cost.real == s.cost);
}

TEST_CASE("infeasible instances") {
  CHECK_THROWS_AS(solve(parse_instance("ops: =\nkeys: a b\nbeta: 1 1\nalpha: 1 0 0\n")),
                  InfeasibleInstance);
  // a key and the gap just above it cannot be split by < alone
  CHECK_THROWS_AS(
      solve(parse_instance("ops: <\nkeys: a\nbeta: 1\nalpha: 0 1\nqueries: K1 Gap1\n")),
      InfeasibleInstance);
  CHECK_NOTHROW(
      solve(parse_instance("ops: <=\nkeys: a\nbeta: 1\nalpha: 0 1\nqueries: K1 Gap1\n")));
}

TEST_CASE("top keys") {
  Instance inst = parse_instance("ops: <\nkeys: a b c\nbeta: 5 5 5\n");
  SubproblemSpace space(inst);
  CHECK(space.top_keys(KeyInterval::everything(), 0).empty());
  CHECK(space.top_keys(closed(1, 3), 2) == std::vector<int>{3, 2});
  Instance distinct = parse_instance("ops: <\nkeys: a b c\nbeta: 1 7 2\n");
  CHECK(SubproblemSpace(distinct).top_keys(KeyInterval::everything(), 1) == std::vector<int>{2});
  CHECK(space.key_count(closed(2, 3)) == 2);
}

TEST_CASE("interval positions") {
  const int n = 4;
  CHECK(KeyInterval::everything().positions(n) == std::pair{0, 8});
  CHECK(closed(2, 3).positions(n) == std::pair{3, 5});
  for (int first = 0; first <= 2 * n; ++first)
    for (int last = first; last <= 2 * n; ++last)
      CHECK(KeyInterval::from_positions(first, last, n).positions(n) == std::pair{first, last});
}

TEST_CASE("weight_of against direct sums") {
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 7), QueryMode::Mixed,
                                  OpSet{Op::Lt});
    SubproblemSpace space(inst);
    PerturbedInstance p(inst);
    PWeight all;
    for (QueryClass q : inst.queries()) all += p.weight(q);
    CHECK(space.weight_of({KeyInterval::everything(), 0}) == all);
    const int n = inst.n();
    for (int first = 0; first <= 2 * n; ++first) {
      for (int last = first; last <= 2 * n; ++last) {
        KeyInterval iv = KeyInterval::from_positions(first, last, n);
        const int keys = space.key_count(iv);
        for (int h = 0; h <= keys; ++h) {
          auto top = space.top_keys(iv, h);
          PWeight direct;
          for (int pos = first; pos <= last; ++pos) {
            QueryClass q = QueryClass::at(pos);
            if (!inst.present(q)) continue;
            if (q.is_key() && std::find(top.begin(), top.end(), q.index) != top.end()) continue;
            direct += p.weight(q);
          }
          CHECK(space.weight_of({iv, h}) == direct);
        }
        if (keys > 0) CHECK(space.weight_of({iv, keys}).eps == 0);
      }
    }
  }
}

TEST_CASE("cost table cells equal the oracle on their query sets") {
  Rng rng(8);
  for (int t = 0; t < 25; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 5), QueryMode::Mixed,
                                  testing::random_ops(rng));
    CostTable table = solve_cost_table(inst);
    SubproblemSpace space(inst);
    const int n = inst.n();
    CHECK(table.at(3, 2, 0) == PWeight());
    for (int first = 0; first <= 2 * n; ++first) {
      for (int last = first; last <= 2 * n; ++last) {
        KeyInterval iv = KeyInterval::from_positions(first, last, n);
        const int keys = space.key_count(iv);
        CHECK_THROWS(table.at(first, last, keys + 1));
        for (int h = 0; h <= keys; ++h) {
          auto cell = table.at(first, last, h);
          if (h < keys && cell) {
            auto next = table.at(first, last, h + 1);
            REQUIRE(next.has_value());
            CHECK(*next <= *cell);
          }
          auto classes = space.classes_of({iv, h});
          if (classes.empty()) continue;
          Instance sub = restrict_to(inst, classes);
          bool feasible = true;
          Rational best;
          try {
            best = brute_2wcst(sub).cost;
          } catch (const InfeasibleInstance&) {
            feasible = false;
          }
          REQUIRE(cell.has_value() == feasible);
          if (feasible) CHECK(cell->real == best);
        }
      }
    }
  }
}

TEST_CASE("matches the oracle; trees verify and follow max likelihood") {
  Rng rng(1234);
  int feasible = 0;
  for (int t = 0; t < 150; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 7), QueryMode::Mixed,
                                  testing::random_ops(rng));
    std::optional<Rational> expect;
    try {
      expect = brute_2wcst(inst).cost;
    } catch (const InfeasibleInstance&) {
    }
    if (!expect) {
      CHECK_THROWS_AS(solve(inst), InfeasibleInstance);
      continue;
    }
    ++feasible;
    Solution s = solve(inst);
    CHECK(s.cost == *expect);
    CHECK(verify(s.tree, inst).ok());
    CHECK(spuler_check(s.tree, inst));
    Solution exact = solve(inst, {.force_exact = true});
    CHECK(exact.perturbed_cost == s.perturbed_cost);
    CHECK(exact.tree == s.tree);
  }
  CHECK(feasible > 60);
}

TEST_CASE("scaling all weights scales the optimum") {
  Rng rng(6);
  for (int t = 0; t < 40; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 8), QueryMode::Standard,
                                  OpSet{Op::Lt, Op::Eq});
    Rational f(testing::uniform(rng, 1, 9), testing::uniform(rng, 1, 9));
    f.canonicalize();
    CHECK(solve(inst.scaled(f)).cost == f * solve(inst).cost);
  }
}

TEST_CASE("entropy is a lower bound") {
  Rng rng(10);
  for (int t = 0; t < 60; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 12), QueryMode::Mixed,
                                  OpSet{Op::Lt, Op::Le, Op::Eq});
    if (inst.total_weight() == 0) continue;
    Instance norm = inst.normalized();
    CHECK(entropy(norm) <= to_double(solve(norm).cost) + 1e-9);
  }
}

TEST_CASE("larger instances: packed and exact paths agree") {
  Rng rng(15);
  for (int t = 0; t < 6; ++t) {
    Instance inst = testing::make(rng, 25, QueryMode::Standard, OpSet{Op::Lt, Op::Le, Op::Eq}, 8);
    Solution a = solve(inst);
    Solution b = solve(inst, {.force_exact = true});
    CHECK(a.perturbed_cost == b.perturbed_cost);
    CHECK(verify(a.tree, inst).ok());
  }
}
