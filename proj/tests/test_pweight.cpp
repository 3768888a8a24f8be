#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "twcst/pweight.hpp"

using namespace twcst;

TEST_CASE("add") {
  CHECK(add(PWeight(1, 2), PWeight(3, 4)) == PWeight(4, 6));
  CHECK(add(PWeight(Rational(1, 3), 5), PWeight()) == PWeight(Rational(1, 3), 5));
  CHECK(add(PWeight(1, -1), PWeight(-1, 1)) == PWeight(0, 0));
}

TEST_CASE("scale") {
  CHECK(scale(2, PWeight(3, 5)) == PWeight(6, 10));
  CHECK(scale(0, PWeight(7, 9)) == PWeight());
  CHECK(scale(1, PWeight(7, 9)) == PWeight(7, 9));
}

TEST_CASE("less is lexicographic") {
  CHECK(less(PWeight(1, 9), PWeight(2, 0)));
  CHECK(less(PWeight(1, 2), PWeight(1, 3)));
  CHECK_FALSE(less(PWeight(1, 2), PWeight(1, 2)));
  CHECK_FALSE(less(PWeight(2, 0), PWeight(1, 9)));
}

TEST_CASE("less is a strict total order on samples") {
  std::vector<PWeight> xs;
  for (int r = -2; r <= 2; ++r)
    for (int e = -2; e <= 2; ++e) xs.emplace_back(Rational(r, 2), e);
  for (const auto& a : xs) {
    CHECK_FALSE(less(a, a));
    for (const auto& b : xs) {
      if (!(a == b)) CHECK(less(a, b) != less(b, a));
      for (const auto& c : xs)
        if (less(a, b) && less(b, c)) CHECK(less(a, c));
    }
  }
}

TEST_CASE("printing") {
  CHECK(to_string(PWeight(Rational(3, 2), 0)) == "3/2");
  CHECK(to_string(PWeight(Rational(3, 2), Rational(1, 4))) == "3/2 + (1/4)e");
}

TEST_CASE("perturb equal weights") {
  Instance inst = parse_instance("ops: <\nkeys: a b c\nbeta: 5 5 5\n");
  PerturbedInstance p = perturb_instance(inst);
  CHECK(p.beta(1) == PWeight(5, 1));
  CHECK(p.beta(2) == PWeight(5, 2));
  CHECK(p.beta(3) == PWeight(5, 3));
  CHECK(p.keys_by_weight() == std::vector<int>{3, 2, 1});
}

TEST_CASE("perturb n = 1 and gaps") {
  Instance inst = parse_instance("ops: <\nkeys: a\nbeta: 4\nalpha: 1 2\n");
  PerturbedInstance p = perturb_instance(inst);
  CHECK(p.beta(1) == PWeight(4, 1));
  CHECK(p.alpha(0) == PWeight(1, 0));
  CHECK(p.alpha(1) == PWeight(2, 0));
}

TEST_CASE("perturbed keys are distinct and break ties upward") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 10), QueryMode::Standard,
                                  OpSet{Op::Lt}, 2);
    PerturbedInstance p = perturb_instance(inst);
    for (int i = 1; i <= inst.n(); ++i) {
      for (int j = i + 1; j <= inst.n(); ++j) {
        CHECK_FALSE(p.beta(i) == p.beta(j));
        if (inst.beta(i) == inst.beta(j)) CHECK(less(p.beta(i), p.beta(j)));
        CHECK(less(p.beta(i), p.beta(j)) == !perturbed_heavier(inst, i, j));
      }
    }
  }
}
