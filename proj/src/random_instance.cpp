#include "twcst/random_instance.hpp"

#include <vector>

namespace twcst {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Instance random_instance(Rng& rng, const RandomSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw Error("random instance needs n >= 1");
  OpSet ops;
  if (spec.ops) {
    ops = *spec.ops;
  } else {
    ops = OpSet::from_bits(static_cast<std::uint8_t>(uniform(rng, 1, 7)));
  }

  std::vector<Rational> pool;
  for (int i = 0; i < std::max(1, spec.distinct_weights); ++i) {
    Rational w(uniform(rng, 1, spec.max_numerator), uniform(rng, 1, std::max(1, spec.max_denominator)));
    w.canonicalize();
    pool.push_back(w);
  }
  auto draw = [&] { return pool[static_cast<size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))]; };

  QueryMode mode = spec.queries;
  if (mode == QueryMode::Mixed) mode = static_cast<QueryMode>(uniform(rng, 0, 2));
  std::vector<QueryClass> queries;
  for (int p = 0; p < 2 * n + 1; ++p) {
    const bool key = p % 2 == 1;
    bool take = false;
    switch (mode) {
      case QueryMode::Standard: take = true; break;
      case QueryMode::SuccessfulOnly: take = key; break;
      default: take = uniform(rng, 0, 3) != 0; break;
    }
    if (take) queries.push_back(QueryClass::at(p));
  }
  if (queries.empty()) queries.push_back(QueryClass::key(uniform(rng, 1, n)));

  std::vector<Rational> beta(static_cast<size_t>(n), Rational(0));
  std::vector<Rational> alpha(static_cast<size_t>(n + 1), Rational(0));
  for (QueryClass q : queries) {
    // an occasional zero weight on a present class
    Rational w = uniform(rng, 0, 15) == 0 ? Rational(0) : draw();
    (q.is_key() ? beta[static_cast<size_t>(q.index - 1)] : alpha[static_cast<size_t>(q.index)]) = w;
  }
  std::vector<std::string> keys;
  for (int i = 1; i <= n; ++i) keys.push_back(std::to_string(i));
  return Instance(std::move(keys), ops, std::move(beta), std::move(alpha), std::move(queries),
                  KeyType::Int);
}

}  // namespace twcst
