#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "twcst/instance.hpp"

namespace twcst {

enum class QueryMode { Standard, SuccessfulOnly, Subset, Mixed };

struct RandomSpec {
  int n = 5;
  QueryMode queries = QueryMode::Mixed;
  /// Operator set; random nonempty subset when unset.
  std::optional<OpSet> ops;
  /// Weights are drawn from a pool of this many distinct values, so ties are
  /// common when it is small.
  int distinct_weights = 4;
  /// Allow p/q weights with q up to this value.
  int max_denominator = 3;
  int max_numerator = 9;
};

using Rng = std::mt19937_64;

Instance random_instance(Rng& rng, const RandomSpec& spec);

}  // namespace twcst
