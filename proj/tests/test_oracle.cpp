#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "twcst/approx.hpp"
#include "twcst/oracle.hpp"

using namespace twcst;

TEST_CASE("one key") {
  Instance inst = parse_instance("ops: < =\nkeys: a\nbeta: 3\n");
  CHECK(brute_2wcst(inst).cost == 0);
  CHECK(brute_gbst(inst).cost == 3);
  CHECK(brute_split(inst).cost == 3);
}

TEST_CASE("< only on successful queries is the alphabetic problem") {
  Rng rng(61);
  for (int t = 0; t < 60; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 8), QueryMode::SuccessfulOnly,
                                  OpSet{Op::Lt});
    AlphabeticProblem p{inst.beta()};
    CHECK(brute_2wcst(inst).cost == cost(alphabetic_tree(p), alphabetic_instance(p)));
  }
}

TEST_CASE("brute force agrees with literal enumeration") {
  Rng rng(62);
  for (int t = 0; t < 120; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 4), QueryMode::Mixed,
                                  testing::random_ops(rng));
    auto trees = enumerate_trees(inst);
    if (trees.empty()) {
      CHECK_THROWS_AS(brute_2wcst(inst), InfeasibleInstance);
      continue;
    }
    Rational best = cost(trees.front(), inst);
    for (const Tree& tr : trees) {
      CHECK(verify(tr, inst).ok());
      best = std::min(best, cost(tr, inst));
    }
    OracleSolution o = brute_2wcst(inst);
    CHECK(o.cost == best);
    CHECK(verify(o.tree, inst).ok());
    CHECK(cost(o.tree, inst) == o.cost);
  }
}

TEST_CASE("enumeration counts") {
  // one key, both gaps, < and <=: two orders of the two cuts
  Instance inst = parse_instance("ops: < <=\nkeys: a\nbeta: 1\nalpha: 1 1\n");
  CHECK(enumerate_trees(inst).size() == 2);
  Instance three = parse_instance("ops: =\nkeys: a b c\nbeta: 1 1 1\n");
  // an equality chain over 3 keys: 3 * 2 orders
  CHECK(enumerate_trees(three).size() == 6);
}

TEST_CASE("perturbed argmin is an argmin") {
  Rng rng(63);
  for (int t = 0; t < 60; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 2, 4), QueryMode::Mixed,
                                  testing::random_ops(rng), 2);
    auto trees = enumerate_trees(inst);
    if (trees.empty()) continue;
    PerturbedInstance p(inst);
    size_t arg = 0;
    Rational best = cost(trees[0], inst);
    PWeight pbest = perturbed_cost(trees[0], p);
    for (size_t i = 1; i < trees.size(); ++i) {
      best = std::min(best, cost(trees[i], inst));
      PWeight c = perturbed_cost(trees[i], p);
      if (c < pbest) {
        pbest = c;
        arg = i;
      }
    }
    CHECK(cost(trees[arg], inst) == best);
  }
}

TEST_CASE("size limit") {
  std::string keys = "keys:", beta = "beta:";
  for (int i = 0; i <= kBruteLimit; ++i) {
    keys += " k" + std::to_string(100 + i);
    beta += " 1";
  }
  Instance big = parse_instance("ops: <\n" + keys + "\n" + beta + "\n");
  CHECK_THROWS(brute_2wcst(big));
  CHECK_THROWS(brute_split(big));
  CHECK_THROWS(brute_gbst(big));
}
