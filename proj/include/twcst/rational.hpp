#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace twcst {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses an integer ("12"), a decimal ("0.99", "-1.5e0" is not accepted) or a
/// fraction ("3/7"). Returns nullopt on malformed input. Decimals are exact.
std::optional<Rational> parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

/// Fixed-point rendering with `digits` fractional digits, rounded half away
/// from zero.
std::string to_decimal(const Rational& value, int digits = 6);

double to_double(const Rational& value);

/// Weights rescaled onto a common integer grid: values[i] == input[i] * scale.
/// `fits` is false when any scaled value (or `headroom` times the scaled
/// total) leaves the int64 range; callers then fall back to exact rationals.
struct ScaledWeights {
  std::vector<std::int64_t> values;
  BigInt scale;
  bool fits = false;
};

ScaledWeights scale_to_integers(std::span<const Rational> weights,
                                const BigInt& headroom);

}  // namespace twcst
