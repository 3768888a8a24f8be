#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twcst/rational.hpp"

namespace twcst {

/// Comparison operators after normalization. `>` and `>=` are folded into
/// `<=` and `<` with yes/no branches swapped.
enum class Op : std::uint8_t { Lt, Le, Eq };

std::string_view op_token(Op op);

/// Small set of normalized operators.
class OpSet {
 public:
  constexpr OpSet() = default;
  constexpr OpSet(std::initializer_list<Op> ops) {
    for (Op op : ops) insert(op);
  }

  constexpr void insert(Op op) { bits_ |= bit(op); }
  constexpr bool contains(Op op) const { return (bits_ & bit(op)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool has_inequality() const {
    return contains(Op::Lt) || contains(Op::Le);
  }
  std::vector<Op> to_vector() const;
  std::string to_string() const;  // e.g. "< <= ="

  constexpr std::uint8_t bits() const { return bits_; }
  static constexpr OpSet from_bits(std::uint8_t b) {
    OpSet s;
    s.bits_ = b & 7u;
    return s;
  }
  friend constexpr bool operator==(OpSet, OpSet) = default;

 private:
  static constexpr std::uint8_t bit(Op op) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(op));
  }
  std::uint8_t bits_ = 0;
};

/// Raw (unnormalized) comparison tokens.
enum class RawOp : std::uint8_t { Less, LessEq, Equal, GreaterEq, Greater };

/// Maps `>` to `<=` and `>=` to `<`; the others map to themselves.
OpSet normalize_ops(std::span<const RawOp> raw);

// "< <= =" style; commas also separate. Throws InvalidInstance on junk.
OpSet parse_ops(std::string_view text);

/// An equivalence class of query values relative to the keys: either equal to
/// key K_i (1 <= i <= n) or strictly inside gap i (0 <= i <= n), where gap i
/// lies between K_i and K_{i+1}.
struct QueryClass {
  enum class Kind : std::uint8_t { Key, Gap };
  Kind kind = Kind::Gap;
  int index = 0;

  static constexpr QueryClass key(int i) { return {Kind::Key, i}; }
  static constexpr QueryClass gap(int i) { return {Kind::Gap, i}; }
  /// Classes in sorted order occupy positions Gap0=0, K1=1, Gap1=2, ..., Gapn=2n.
  static constexpr QueryClass at(int position) {
    return position % 2 == 1 ? key((position + 1) / 2) : gap(position / 2);
  }

  constexpr bool is_key() const { return kind == Kind::Key; }
  constexpr int position() const { return is_key() ? 2 * index - 1 : 2 * index; }

  friend constexpr bool operator==(QueryClass, QueryClass) = default;
  friend constexpr auto operator<=>(const QueryClass& a, const QueryClass& b) {
    return a.position() <=> b.position();
  }
};

/// "K3" or "Gap2".
std::string to_string(QueryClass q);

enum class QueryVariant { Standard, SuccessfulOnly };

std::vector<QueryClass> canonical_queries(int n, QueryVariant variant);

enum class KeyType { String, Int };

/// An immutable problem instance: keys, the set of query classes that can
/// occur, the allowed operators and the class weights. Weights are exact and
/// need not sum to one.
class Instance {
 public:
  /// Validates and builds. `queries` lists the classes that may occur; every
  /// class outside it must carry weight zero.
  Instance(std::vector<std::string> keys, OpSet ops, std::vector<Rational> beta,
           std::vector<Rational> alpha, std::vector<QueryClass> queries,
           KeyType key_type = KeyType::String);

  /// Convenience: keys named K1..Kn.
  static Instance with_default_keys(OpSet ops, std::vector<Rational> beta,
                                    std::vector<Rational> alpha,
                                    QueryVariant variant);

  int n() const { return static_cast<int>(beta_.size()); }
  int class_count() const { return 2 * n() + 1; }
  const std::vector<std::string>& keys() const { return keys_; }
  KeyType key_type() const { return key_type_; }
  OpSet ops() const { return ops_; }
  const std::vector<Rational>& beta() const { return beta_; }
  const std::vector<Rational>& alpha() const { return alpha_; }
  const Rational& beta(int i) const { return beta_[static_cast<size_t>(i - 1)]; }
  const Rational& alpha(int i) const { return alpha_[static_cast<size_t>(i)]; }

  const Rational& weight(QueryClass q) const {
    return q.is_key() ? beta(q.index) : alpha(q.index);
  }
  const Rational& weight_at(int position) const {
    return weight(QueryClass::at(position));
  }
  bool present(QueryClass q) const { return present_at(q.position()); }
  bool present_at(int position) const {
    return present_[static_cast<size_t>(position)] != 0;
  }
  /// Present classes in sorted order.
  std::vector<QueryClass> queries() const;
  Rational total_weight() const;

  bool is_standard() const;
  bool is_successful_only() const;

  /// Same instance with a different operator set.
  Instance with_ops(OpSet ops) const;
  /// Same instance with every weight multiplied by `factor` (> 0).
  Instance scaled(const Rational& factor) const;
  /// Same instance normalized to total weight one (requires positive total).
  Instance normalized() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<std::string> keys_;
  KeyType key_type_;
  OpSet ops_;
  std::vector<Rational> beta_;
  std::vector<Rational> alpha_;
  std::vector<std::uint8_t> present_;
};

/// Raised for malformed instance files; `line` is 1-based (0 when the error
/// is not tied to a line).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised by the Instance constructor for invalid data.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& instance);

}  // namespace twcst
