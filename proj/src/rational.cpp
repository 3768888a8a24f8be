#include "twcst/rational.hpp"

#include <cctype>
#include <limits>

namespace twcst {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    result = Rational(BigInt(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    std::string digits = std::string(whole) + std::string(frac);
    if (digits.empty()) digits = "0";
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    result = Rational(BigInt(digits, 10), den);
  } else {
    if (!all_digits(body)) return std::nullopt;
    result = Rational(BigInt(std::string(body), 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  BigInt pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(value) * pow10;
  // round half away from zero
  BigInt q = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  std::string s = q.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<size_t>(digits)) {
      s.insert(0, static_cast<size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<size_t>(digits), ".");
  }
  if (value < 0 && q != 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& value) { return value.get_d(); }

ScaledWeights scale_to_integers(std::span<const Rational> weights,
                                const BigInt& headroom) {
  ScaledWeights out;
  out.scale = 1;
  for (const auto& w : weights) {
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(),
            w.get_den().get_mpz_t());
  }
  const BigInt limit(std::to_string(std::numeric_limits<std::int64_t>::max()));
  BigInt total = 0;
  out.values.reserve(weights.size());
  out.fits = true;
  for (const auto& w : weights) {
    BigInt v = w.get_num() * (out.scale / w.get_den());
    total += abs(v);
    if (abs(v) > limit) {
      out.fits = false;
      out.values.push_back(0);
      continue;
    }
    out.values.push_back(v.get_si());
  }
  if (total * headroom > limit) out.fits = false;
  return out;
}

}  // namespace twcst
