#include "twcst/instance.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace twcst {

std::string_view op_token(Op op) {
  switch (op) {
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Eq: return "=";
  }
  return "?";
}

std::vector<Op> OpSet::to_vector() const {
  std::vector<Op> out;
  for (Op op : {Op::Lt, Op::Le, Op::Eq}) {
    if (contains(op)) out.push_back(op);
  }
  return out;
}

std::string OpSet::to_string() const {
  std::string out;
  for (Op op : to_vector()) {
    if (!out.empty()) out += ' ';
    out += op_token(op);
  }
  return out;
}

OpSet normalize_ops(std::span<const RawOp> raw) {
  OpSet out;
  for (RawOp r : raw) {
    switch (r) {
      case RawOp::Less: out.insert(Op::Lt); break;
      case RawOp::LessEq: out.insert(Op::Le); break;
      case RawOp::Equal: out.insert(Op::Eq); break;
      // Q >= K is "not Q < K": same node with yes/no swapped.
      case RawOp::GreaterEq: out.insert(Op::Lt); break;
      case RawOp::Greater: out.insert(Op::Le); break;
    }
  }
  return out;
}

std::string to_string(QueryClass q) {
  return (q.is_key() ? "K" : "Gap") + std::to_string(q.index);
}

std::vector<QueryClass> canonical_queries(int n, QueryVariant variant) {
  std::vector<QueryClass> out;
  if (variant == QueryVariant::Standard) {
    for (int p = 0; p <= 2 * n; ++p) out.push_back(QueryClass::at(p));
  } else {
    for (int i = 1; i <= n; ++i) out.push_back(QueryClass::key(i));
  }
  return out;
}

Instance::Instance(std::vector<std::string> keys, OpSet ops,
                   std::vector<Rational> beta, std::vector<Rational> alpha,
                   std::vector<QueryClass> queries, KeyType key_type)
    : keys_(std::move(keys)),
      key_type_(key_type),
      ops_(ops),
      beta_(std::move(beta)),
      alpha_(std::move(alpha)) {
  const int n = static_cast<int>(beta_.size());
  if (n < 1) throw InvalidInstance("instance needs at least one key");
  if (keys_.size() != beta_.size()) {
    throw InvalidInstance("key count does not match beta count");
  }
  if (alpha_.size() != beta_.size() + 1) {
    throw InvalidInstance("alpha must have n+1 entries");
  }
  if (ops_.empty()) throw InvalidInstance("operator set is empty");
  // gmp leaves (int, int) constructions unreduced
  for (auto& w : beta_) {
    w.canonicalize();
    if (w < 0) throw InvalidInstance("negative weight");
  }
  for (auto& w : alpha_) {
    w.canonicalize();
    if (w < 0) throw InvalidInstance("negative weight");
  }
  present_.assign(static_cast<size_t>(2 * n + 1), 0);
  for (QueryClass q : queries) {
    const int lo = q.is_key() ? 1 : 0;
    if (q.index < lo || q.index > n) {
      throw InvalidInstance("query class " + twcst::to_string(q) +
                            " outside representable classes");
    }
    auto& slot = present_[static_cast<size_t>(q.position())];
    if (slot) throw InvalidInstance("duplicate query class " + twcst::to_string(q));
    slot = 1;
  }
  for (int p = 0; p <= 2 * n; ++p) {
    if (!present_at(p) && weight_at(p) != 0) {
      throw InvalidInstance("class " + twcst::to_string(QueryClass::at(p)) +
                            " has weight but is not in the query set");
    }
  }
}

Instance Instance::with_default_keys(OpSet ops, std::vector<Rational> beta,
                                     std::vector<Rational> alpha,
                                     QueryVariant variant) {
  const int n = static_cast<int>(beta.size());
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("K" + std::to_string(i));
  if (alpha.empty()) alpha.assign(beta.size() + 1, Rational(0));
  return Instance(std::move(names), ops, std::move(beta), std::move(alpha),
                  canonical_queries(n, variant));
}

std::vector<QueryClass> Instance::queries() const {
  std::vector<QueryClass> out;
  for (int p = 0; p < class_count(); ++p) {
    if (present_at(p)) out.push_back(QueryClass::at(p));
  }
  return out;
}

Rational Instance::total_weight() const {
  Rational total = 0;
  for (const auto& w : beta_) total += w;
  for (const auto& w : alpha_) total += w;
  return total;
}

bool Instance::is_standard() const {
  return std::all_of(present_.begin(), present_.end(),
                     [](std::uint8_t b) { return b != 0; });
}

bool Instance::is_successful_only() const {
  for (int p = 0; p < class_count(); ++p) {
    if (present_at(p) != (p % 2 == 1)) return false;
  }
  return true;
}

Instance Instance::with_ops(OpSet ops) const {
  Instance copy = *this;
  if (ops.empty()) throw InvalidInstance("operator set is empty");
  copy.ops_ = ops;
  return copy;
}

Instance Instance::scaled(const Rational& factor) const {
  if (factor <= 0) throw InvalidInstance("scale factor must be positive");
  Instance copy = *this;
  for (auto& w : copy.beta_) w *= factor;
  for (auto& w : copy.alpha_) w *= factor;
  return copy;
}

Instance Instance::normalized() const {
  Rational total = total_weight();
  if (total <= 0) throw InvalidInstance("cannot normalize zero total weight");
  return scaled(1 / total);
}

ParseError::ParseError(int line, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                     : message),
      line_(line) {}

namespace {

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<RawOp> parse_op_token(const std::string& tok) {
  if (tok == "<") return RawOp::Less;
  if (tok == "<=" || tok == "≤") return RawOp::LessEq;
  if (tok == "=" || tok == "==") return RawOp::Equal;
  if (tok == ">=" || tok == "≥") return RawOp::GreaterEq;
  if (tok == ">") return RawOp::Greater;
  return std::nullopt;
}

std::optional<QueryClass> parse_class_token(const std::string& tok) {
  auto parse_index = [](std::string_view digits) -> std::optional<int> {
    if (digits.empty() || digits.size() > 9) return std::nullopt;
    int v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  std::string_view t = tok;
  if (t.starts_with("Gap")) {
    if (auto i = parse_index(t.substr(3))) return QueryClass::gap(*i);
  } else if (t.starts_with("K")) {
    if (auto i = parse_index(t.substr(1))) return QueryClass::key(*i);
  }
  return std::nullopt;
}

struct Field {
  int line = 0;
  std::vector<std::string> tokens;
};

int compare_keys(const std::string& a, const std::string& b, KeyType type) {
  if (type == KeyType::Int) {
    BigInt x(a, 10), y(b, 10);
    return cmp(x, y);
  }
  return a.compare(b);
}

std::vector<Rational> parse_weights(const Field& f, const char* name) {
  std::vector<Rational> out;
  for (const auto& tok : f.tokens) {
    auto r = parse_rational(tok);
    if (!r) throw ParseError(f.line, std::string("malformed ") + name + " weight '" + tok + "'");
    if (*r < 0) throw ParseError(f.line, std::string("negative ") + name + " weight '" + tok + "'");
    out.push_back(*r);
  }
  return out;
}

}  // namespace

OpSet parse_ops(std::string_view text) {
  std::string spaced(text);
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::vector<RawOp> raw;
  for (const auto& tok : split_tokens(spaced)) {
    auto op = parse_op_token(tok);
    if (!op) throw InvalidInstance("unknown operator '" + tok + "'");
    raw.push_back(*op);
  }
  if (raw.empty()) throw InvalidInstance("empty operator set");
  return normalize_ops(raw);
}

Instance parse_instance(std::string_view text) {
  std::map<std::string, Field> fields;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = split_tokens(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected 'field: values'");
    }
    std::string name = split_tokens(line.substr(0, colon)).empty()
                           ? std::string()
                           : split_tokens(line.substr(0, colon)).front();
    static const char* known[] = {"ops", "keys", "beta", "alpha", "queries", "keytype"};
    if (std::find(std::begin(known), std::end(known), name) == std::end(known)) {
      throw ParseError(line_no, "unknown field '" + name + "'");
    }
    if (fields.count(name)) throw ParseError(line_no, "field '" + name + "' repeated");
    fields[name] = Field{line_no, split_tokens(line.substr(colon + 1))};
    if (end == text.size()) break;
  }

  for (const char* required : {"ops", "keys", "beta"}) {
    if (!fields.count(required)) {
      throw ParseError(0, std::string("missing required field '") + required + "'");
    }
  }

  KeyType key_type = KeyType::String;
  if (auto it = fields.find("keytype"); it != fields.end()) {
    const auto& t = it->second.tokens;
    if (t.size() == 1 && t[0] == "int") {
      key_type = KeyType::Int;
    } else if (t.size() == 1 && t[0] == "string") {
      key_type = KeyType::String;
    } else {
      throw ParseError(it->second.line, "keytype must be 'int' or 'string'");
    }
  }

  const Field& ops_field = fields["ops"];
  std::vector<RawOp> raw;
  for (const auto& tok : ops_field.tokens) {
    auto op = parse_op_token(tok);
    if (!op) throw ParseError(ops_field.line, "unknown operator token '" + tok + "'");
    raw.push_back(*op);
  }
  if (raw.empty()) throw ParseError(ops_field.line, "no operators given");
  OpSet ops = normalize_ops(raw);

  const Field& keys_field = fields["keys"];
  std::vector<std::string> keys = keys_field.tokens;
  if (keys.empty()) throw ParseError(keys_field.line, "no keys given");
  if (key_type == KeyType::Int) {
    for (const auto& k : keys) {
      auto r = parse_rational(k);
      if (!r || r->get_den() != 1 || k.find_first_of("./") != std::string::npos) {
        throw ParseError(keys_field.line, "key '" + k + "' is not an integer");
      }
    }
  }
  for (size_t i = 0; i < keys.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (compare_keys(keys[i], keys[j], key_type) == 0) {
        throw ParseError(keys_field.line, "duplicate key '" + keys[i] + "'");
      }
    }
  }
  for (size_t i = 1; i < keys.size(); ++i) {
    if (compare_keys(keys[i - 1], keys[i], key_type) >= 0) {
      throw ParseError(keys_field.line, "keys must be strictly increasing ('" +
                                            keys[i - 1] + "' before '" + keys[i] + "')");
    }
  }
  const int n = static_cast<int>(keys.size());

  const Field& beta_field = fields["beta"];
  auto beta = parse_weights(beta_field, "beta");
  if (static_cast<int>(beta.size()) != n) {
    throw ParseError(beta_field.line, "beta needs " + std::to_string(n) + " entries");
  }

  std::vector<Rational> alpha(static_cast<size_t>(n + 1), Rational(0));
  bool has_alpha = false;
  int alpha_line = 0;
  if (auto it = fields.find("alpha"); it != fields.end()) {
    alpha = parse_weights(it->second, "alpha");
    alpha_line = it->second.line;
    has_alpha = true;
    if (static_cast<int>(alpha.size()) != n + 1) {
      throw ParseError(it->second.line, "alpha needs " + std::to_string(n + 1) + " entries");
    }
  }

  std::vector<QueryClass> queries;
  int queries_line = 0;
  if (auto it = fields.find("queries"); it != fields.end()) {
    queries_line = it->second.line;
    const auto& t = it->second.tokens;
    if (t.size() == 1 && t[0] == "standard") {
      queries = canonical_queries(n, QueryVariant::Standard);
    } else if (t.size() == 1 && t[0] == "keys-only") {
      queries = canonical_queries(n, QueryVariant::SuccessfulOnly);
    } else {
      for (const auto& tok : t) {
        auto q = parse_class_token(tok);
        if (!q) throw ParseError(queries_line, "unknown query class '" + tok + "'");
        const int lo = q->is_key() ? 1 : 0;
        if (q->index < lo || q->index > n) {
          throw ParseError(queries_line, "query '" + tok + "' outside representable classes");
        }
        if (std::find(queries.begin(), queries.end(), *q) != queries.end()) {
          throw ParseError(queries_line, "query '" + tok + "' listed twice");
        }
        queries.push_back(*q);
      }
    }
  } else {
    queries = canonical_queries(
        n, has_alpha ? QueryVariant::Standard : QueryVariant::SuccessfulOnly);
  }

  try {
    return Instance(std::move(keys), ops, std::move(beta), std::move(alpha),
                    std::move(queries), key_type);
  } catch (const InvalidInstance& e) {
    int line = queries_line ? queries_line : alpha_line;
    throw ParseError(line, e.what());
  }
}

std::string serialize_instance(const Instance& instance) {
  std::ostringstream out;
  if (instance.key_type() == KeyType::Int) out << "keytype: int\n";
  out << "ops: " << instance.ops().to_string() << "\n";
  out << "keys:";
  for (const auto& k : instance.keys()) out << ' ' << k;
  out << "\nbeta:";
  for (const auto& w : instance.beta()) out << ' ' << to_string(w);
  out << "\n";
  if (!instance.is_successful_only()) {
    out << "alpha:";
    for (const auto& w : instance.alpha()) out << ' ' << to_string(w);
    out << "\n";
  }
  out << "queries:";
  if (instance.is_standard()) {
    out << " standard";
  } else if (instance.is_successful_only()) {
    out << " keys-only";
  } else {
    for (QueryClass q : instance.queries()) out << ' ' << to_string(q);
  }
  out << "\n";
  return out.str();
}

}  // namespace twcst
