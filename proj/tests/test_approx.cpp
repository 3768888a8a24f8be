#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>

#include "support.hpp"
#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"

using namespace twcst;

namespace {

template <class T>
T depth_cost(const std::vector<T>& w, const std::vector<int>& d) {
  T c = 0;
  for (size_t i = 0; i < w.size(); ++i) c += w[i] * d[i];
  return c;
}

// textbook O(n^3) interval DP
Rational alphabetic_opt(const std::vector<Rational>& w) {
  const size_t n = w.size();
  std::vector<Rational> pre(n + 1, 0);
  for (size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + w[i];
  std::vector<std::vector<Rational>> opt(n, std::vector<Rational>(n, 0));
  for (size_t len = 2; len <= n; ++len) {
    for (size_t i = 0; i + len <= n; ++i) {
      const size_t j = i + len - 1;
      Rational best = -1;
      for (size_t k = i; k < j; ++k) {
        Rational c = opt[i][k] + opt[k + 1][j];
        if (best < 0 || c < best) best = c;
      }
      opt[i][j] = best + pre[j + 1] - pre[i];
    }
  }
  return opt[0][n - 1];
}

// every binary shape with `leaves` leaves, as depth vectors
const std::vector<std::vector<int>>& shapes(int leaves) {
  static std::map<int, std::vector<std::vector<int>>> memo;
  if (auto it = memo.find(leaves); it != memo.end()) return it->second;
  std::vector<std::vector<int>> out;
  if (leaves == 1) {
    out.push_back({0});
  } else {
    for (int left = 1; left < leaves; ++left) {
      for (const auto& a : shapes(left)) {
        for (const auto& b : shapes(leaves - left)) {
          std::vector<int> d;
          for (int x : a) d.push_back(x + 1);
          for (int x : b) d.push_back(x + 1);
          out.push_back(std::move(d));
        }
      }
    }
  }
  return memo[leaves] = std::move(out);
}

Rational exhaustive_opt(const std::vector<Rational>& w) {
  Rational best = -1;
  for (const auto& d : shapes(static_cast<int>(w.size()))) {
    Rational c = depth_cost(w, d);
    if (best < 0 || c < best) best = c;
  }
  return best;
}

std::vector<Rational> rationals(std::initializer_list<int> xs) {
  std::vector<Rational> out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("entropy") {
  Instance four = parse_instance("ops: <\nkeys: a b\nbeta: 1 1\nalpha: 1 0 1\nqueries: Gap0 K1 K2 Gap2\n");
  CHECK(entropy(four.normalized()) == doctest::Approx(2.0));
  Instance point = parse_instance("ops: <\nkeys: a b\nbeta: 1 0\n");
  CHECK(entropy(point) == doctest::Approx(0.0));
  Instance dyadic = parse_instance("ops: <\nkeys: a b\nbeta: 1/2 1/4\nalpha: 1/4 0 0\n");
  CHECK(entropy(dyadic) == doctest::Approx(1.5));
}

TEST_CASE("alphabetic small cases") {
  auto two = alphabetic_depths(rationals({1, 1}));
  CHECK(two == std::vector<int>{1, 1});
  auto four = alphabetic_depths(rationals({1, 1, 1, 1}));
  CHECK(depth_cost(rationals({1, 1, 1, 1}), four) == 8);
  auto w = rationals({8, 1, 1, 8});
  CHECK(depth_cost(w, alphabetic_depths(w)) == exhaustive_opt(w));
  CHECK(alphabetic_depths(rationals({5})) == std::vector<int>{0});
}

TEST_CASE("Hu-Tucker against exhaustive shapes, n <= 10") {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform(rng, 1, 10);
    std::vector<Rational> w;
    std::vector<std::int64_t> wi;
    for (int i = 0; i < n; ++i) {
      const int x = testing::uniform(rng, 0, 6);
      w.emplace_back(x);
      wi.push_back(x);
    }
    auto d = alphabetic_depths(w);
    CHECK(depth_cost(w, d) == exhaustive_opt(w));
    CHECK(depth_cost(wi, alphabetic_depths(wi)) == depth_cost(w, d));
  }
}

TEST_CASE("Hu-Tucker against the cubic DP") {
  Rng rng(32);
  for (int t = 0; t < 150; ++t) {
    const int n = testing::uniform(rng, 1, 45);
    std::vector<Rational> w;
    for (int i = 0; i < n; ++i)
      w.emplace_back(testing::uniform(rng, 0, 20), testing::uniform(rng, 1, 4));
    for (auto& x : w) x.canonicalize();
    auto d = alphabetic_depths(w);
    CHECK(depth_cost(w, d) == alphabetic_opt(w));
  }
}

TEST_CASE("alphabetic_tree is a correct < tree for its instance") {
  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    AlphabeticProblem p;
    const int n = testing::uniform(rng, 1, 20);
    for (int i = 0; i < n; ++i) p.weights.emplace_back(testing::uniform(rng, 1, 9));
    Tree tree = alphabetic_tree(p);
    Instance inst = alphabetic_instance(p);
    REQUIRE(verify(tree, inst).ok());
    CHECK(cost(tree, inst) == depth_cost(p.weights, alphabetic_depths(p.weights)));
    if (n <= 8) CHECK(cost(tree, inst) == solve(inst).cost);
  }
}

TEST_CASE("tree_from_depths rejects impossible depths") {
  CHECK_THROWS(tree_from_depths({1, 2}));
  CHECK_THROWS(tree_from_depths({1, 1, 1}));
  CHECK_NOTHROW(tree_from_depths({2, 2, 1}));
}

TEST_CASE("approx3 smallest case") {
  Instance inst = parse_instance("ops: < =\nkeys: a\nbeta: 1/3\nalpha: 1/3 1/3\n");
  ApproxResult a = approx3(inst);
  CHECK(verify(a.tree, inst).ok());
  CHECK(a.cost == cost(a.tree, inst));
  CHECK(a.cost <= solve(inst).cost + 3);
}

TEST_CASE("approx3 uniform successful 16 keys") {
  std::string text = "ops: <\nkeys:";
  std::string beta = "beta:";
  for (int i = 0; i < 16; ++i) {
    text += " k" + std::string(1, static_cast<char>('a' + i));
    beta += " 1/16";
  }
  Instance inst = parse_instance(text + "\n" + beta + "\n");
  ApproxResult a = approx3(inst);
  CHECK(entropy(inst) == doctest::Approx(4.0));
  CHECK(a.cost <= 6);
  CHECK(verify(a.tree, inst).ok());
}

TEST_CASE("approx3 within 3 of the optimum") {
  Rng rng(34);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    OpSet ops = testing::random_ops(rng);
    if (!ops.has_inequality()) continue;
    Instance inst = testing::make(rng, testing::uniform(rng, 1, 30), QueryMode::Mixed, ops);
    std::optional<Solution> opt;
    try {
      opt = solve(inst);
    } catch (const InfeasibleInstance&) {
      CHECK_THROWS_AS(approx3(inst), InfeasibleInstance);
      continue;
    }
    ApproxResult a = approx3(inst);
    CHECK(verify(a.tree, inst).correct);
    CHECK(a.cost == cost(a.tree, inst));
    CHECK(a.cost - opt->cost <= 3 * inst.total_weight());
    ++checked;
  }
  CHECK(checked > 80);
}

TEST_CASE("equality only") {
  // the last key needs no test of its own
  Instance two = parse_instance("ops: =\nkeys: a b\nbeta: 2 1\n");
  CHECK(cost(equality_chain(two), two) == 3);
  Instance inst = parse_instance("ops: =\nkeys: a b c\nbeta: 1 2 1\n");
  CHECK_THROWS_AS(approx3(inst), EqualityOnly);
  Tree chain = equality_chain(inst);
  CHECK(chain.node(chain.root()).key == 2);
  CHECK(cost(chain, inst) == 6);
  CHECK(cost(parse_sexpr("(= K1 (leaf K1) (= K2 (leaf K2) (leaf K3)))"), inst) == 7);
  CHECK(cost(chain, inst) == solve(inst).cost);

  Rng rng(35);
  for (int t = 0; t < 60; ++t) {
    Instance r = testing::make(rng, testing::uniform(rng, 1, 9), QueryMode::SuccessfulOnly,
                               OpSet{Op::Eq});
    CHECK(cost(equality_chain(r), r) == solve(r).cost);
  }
}
