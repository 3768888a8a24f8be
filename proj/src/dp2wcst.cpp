#include "twcst/dp2wcst.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <limits>

namespace twcst {

std::pair<int, int> KeyInterval::positions(int n) const {
  int first = 0;
  int last = 2 * n;
  if (lo) first = lo_closed ? 2 * *lo - 1 : 2 * *lo;
  if (hi) last = hi_closed ? 2 * *hi - 1 : 2 * *hi - 2;
  return {first, last};
}

KeyInterval KeyInterval::from_positions(int first, int last, int n) {
  KeyInterval out;
  if (first > 0) {
    QueryClass q = QueryClass::at(first);
    out.lo = q.index;
    out.lo_closed = q.is_key();
  }
  if (last < 2 * n) {
    QueryClass q = QueryClass::at(last);
    out.hi = q.is_key() ? q.index : q.index + 1;
    out.hi_closed = q.is_key();
  }
  return out;
}

namespace {

// int64 fast path: value = real * scale * M + eps, with M above any eps
// coefficient a cost can reach, so integer order is lexicographic order.
struct PackedArith {
  using Value = std::int64_t;
  static constexpr Value kInf = std::numeric_limits<Value>::max();

  std::int64_t m = 1;
  BigInt scale = 1;

  static Value zero() { return 0; }
  static Value inf() { return kInf; }
  static bool is_inf(Value v) { return v == kInf; }
  static Value add(Value a, Value b) { return (a == kInf || b == kInf) ? kInf : a + b; }
  static Value sub(Value a, Value b) { return a - b; }
  static bool less(Value a, Value b) { return a < b; }
  PWeight to_pweight(Value v) const {
    return PWeight(Rational(BigInt(static_cast<long>(v / m))) / Rational(scale),
                   Rational(static_cast<long>(v % m)));
  }
};

struct ExactValue {
  PWeight w;
  bool inf = false;
};

struct ExactArith {
  using Value = ExactValue;
  static Value zero() { return {}; }
  static Value inf() { return {PWeight(), true}; }
  static bool is_inf(const Value& v) { return v.inf; }
  static Value add(const Value& a, const Value& b) {
    if (a.inf || b.inf) return inf();
    return {a.w + b.w, false};
  }
  static Value sub(const Value& a, const Value& b) { return {a.w - b.w, false}; }
  static bool less(const Value& a, const Value& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.w < b.w;
  }
  static PWeight to_pweight(const Value& v) { return v.w; }
};

template <class A>
class IntervalDp {
 public:
  using V = typename A::Value;

  IntervalDp(const Instance& instance, A arith, std::vector<V> weights)
      : instance_(instance), arith_(std::move(arith)), weights_(std::move(weights)) {
    positions_ = instance.class_count();
    const auto P = static_cast<size_t>(positions_);
    prefix_weight_.assign(P + 1, A::zero());
    prefix_present_.assign(P + 1, 0);
    prefix_keys_.assign(P + 1, 0);
    present_key_.assign(P, 0);
    for (int p = 0; p < positions_; ++p) {
      const auto i = static_cast<size_t>(p);
      const bool present = instance.present_at(p);
      present_key_[i] = present && p % 2 == 1;
      prefix_weight_[i + 1] = A::add(prefix_weight_[i], weights_[i]);
      prefix_present_[i + 1] = prefix_present_[i] + (present ? 1 : 0);
      prefix_keys_[i + 1] = prefix_keys_[i] + (present_key_[i] ? 1 : 0);
    }
    cut_allowed_.assign(P + 1, 0);
    for (int c = 1; c < positions_; ++c) {
      cut_allowed_[static_cast<size_t>(c)] =
          instance.ops().contains(c % 2 == 1 ? Op::Lt : Op::Le);
    }
    equality_ = instance.ops().contains(Op::Eq);

    fwd_offset_.assign(P * P, 0);
    rev_offset_.assign(P * P, 0);
    size_t total = 0;
    for (int lo = 0; lo < positions_; ++lo) {
      for (int hi = lo; hi < positions_; ++hi) {
        fwd_offset_[idx(lo, hi)] = total;
        total += static_cast<size_t>(keys_in(lo, hi) + 1);
      }
    }
    size_t rtotal = 0;
    for (int hi = 0; hi < positions_; ++hi) {
      for (int lo = 0; lo <= hi; ++lo) {
        rev_offset_[idx(hi, lo)] = rtotal;
        rtotal += static_cast<size_t>(keys_in(lo, hi) + 1);
      }
    }
    fwd_.assign(total, A::inf());
    rev_.assign(rtotal, A::inf());
  }

  void run() {
    std::vector<int> by_weight;  // present keys of [lo, hi], heaviest first
    std::vector<V> top_weight;
    std::vector<V> cut_best;
    for (int lo = positions_ - 1; lo >= 0; --lo) {
      by_weight.clear();
      for (int hi = lo; hi < positions_; ++hi) {
        if (present_key_[static_cast<size_t>(hi)]) insert_by_weight(by_weight, hi);
        const int keys = static_cast<int>(by_weight.size());
        top_weight.assign(static_cast<size_t>(keys + 1), A::zero());
        for (int t = 0; t < keys; ++t) {
          top_weight[static_cast<size_t>(t + 1)] =
              A::add(top_weight[static_cast<size_t>(t)],
                     weights_[static_cast<size_t>(by_weight[static_cast<size_t>(t)])]);
        }
        const int present = present_in(lo, hi);
        // cut loop outermost so each h sweep reads adjacent cells
        cut_best.assign(static_cast<size_t>(keys + 1), A::inf());
        for (int c = lo + 1; c <= hi; ++c) {
          if (!cut_allowed_[static_cast<size_t>(c)]) continue;
          const int p = c - 1;
          const int present_left = present_in(lo, p);
          const V* left_row = &fwd_[fwd_offset_[idx(lo, p)]];
          const V* right_row = &rev_[rev_offset_[idx(hi, c)]];
          int top_left = 0;
          for (int h = 0; h <= keys; ++h) {
            if (h > 0 && by_weight[static_cast<size_t>(h - 1)] < c) ++top_left;
            const int count = present - h;
            if (count <= 1) break;
            const int left = present_left - top_left;
            if (left == 0 || left == count) continue;
            V candidate = A::add(left_row[top_left], right_row[h - top_left]);
            if (A::less(candidate, cut_best[static_cast<size_t>(h)]))
              cut_best[static_cast<size_t>(h)] = candidate;
          }
        }
        const V range_weight = A::sub(prefix_weight_[static_cast<size_t>(hi + 1)],
                                      prefix_weight_[static_cast<size_t>(lo)]);
        V* fwd_row = &fwd_[fwd_offset_[idx(lo, hi)]];
        V* rev_row = &rev_[rev_offset_[idx(hi, lo)]];
        for (int h = keys; h >= 0; --h) {
          V value = A::zero();
          if (present - h > 1) {
            // equality first, a cut only on strict improvement
            V best = equality_ && h < keys ? fwd_row[h + 1] : A::inf();
            if (A::less(cut_best[static_cast<size_t>(h)], best)) best = cut_best[static_cast<size_t>(h)];
            value = A::is_inf(best)
                        ? best
                        : A::add(A::sub(range_weight, top_weight[static_cast<size_t>(h)]), best);
          }
          fwd_row[h] = value;
          rev_row[h] = value;
        }
      }
    }
  }

  V root() const { return cell(0, positions_ - 1, 0); }

  V cell(int lo, int hi, int h) const {
    if (hi < lo) return A::zero();
    return fwd_[fwd_offset_[idx(lo, hi)] + static_cast<size_t>(h)];
  }

  Tree reconstruct() const {
    TreeBuilder builder;
    NodeId root = build(builder, 0, positions_ - 1, 0);
    return std::move(builder).build(root);
  }

  const A& arith() const { return arith_; }
  int keys_in(int lo, int hi) const {
    return prefix_keys_[static_cast<size_t>(hi + 1)] - prefix_keys_[static_cast<size_t>(lo)];
  }

 private:
  size_t idx(int a, int b) const {
    return static_cast<size_t>(a) * static_cast<size_t>(positions_) + static_cast<size_t>(b);
  }
  int present_in(int lo, int hi) const {
    return prefix_present_[static_cast<size_t>(hi + 1)] - prefix_present_[static_cast<size_t>(lo)];
  }
  bool heavier(int p, int q) const {
    return A::less(weights_[static_cast<size_t>(q)], weights_[static_cast<size_t>(p)]);
  }
  void insert_by_weight(std::vector<int>& list, int p) const {
    auto it = std::find_if(list.begin(), list.end(), [&](int q) { return heavier(p, q); });
    list.insert(it, p);
  }
  V rev_cell(int lo, int hi, int h) const {
    return rev_[rev_offset_[idx(hi, lo)] + static_cast<size_t>(h)];
  }

  std::vector<int> heaviest(int lo, int hi) const {
    std::vector<int> keys;
    for (int p = lo; p <= hi; ++p) {
      if (present_key_[static_cast<size_t>(p)]) keys.push_back(p);
    }
    std::sort(keys.begin(), keys.end(), [&](int a, int b) { return heavier(a, b); });
    return keys;
  }

  NodeId build(TreeBuilder& out, int lo, int hi, int h) const {
    const auto keys = heaviest(lo, hi);
    std::vector<int> rank(static_cast<size_t>(positions_), INT_MAX);
    for (size_t t = 0; t < keys.size(); ++t) rank[static_cast<size_t>(keys[t])] = static_cast<int>(t);
    const int count = present_in(lo, hi) - h;
    if (count <= 1) {
      std::vector<QueryClass> classes;
      for (int p = lo; p <= hi; ++p) {
        if (instance_.present_at(p) && !(present_key_[static_cast<size_t>(p)] &&
                                         rank[static_cast<size_t>(p)] < h)) {
          classes.push_back(QueryClass::at(p));
        }
      }
      return out.leaf(std::move(classes));
    }
    // Same candidate order and strict improvement rule as run().
    V best = A::inf();
    int best_cut = -1;
    int best_left = 0;
    if (equality_ && h < static_cast<int>(keys.size())) best = cell(lo, hi, h + 1);
    int top_left = 0;
    for (int c = lo + 1; c <= hi; ++c) {
      const int p = c - 1;
      if (present_key_[static_cast<size_t>(p)] && rank[static_cast<size_t>(p)] < h) ++top_left;
      if (!cut_allowed_[static_cast<size_t>(c)]) continue;
      const int left = present_in(lo, p) - top_left;
      if (left == 0 || left == count) continue;
      V candidate = A::add(cell(lo, p, top_left), rev_cell(c, hi, h - top_left));
      if (A::less(candidate, best)) {
        best = candidate;
        best_cut = c;
        best_left = top_left;
      }
    }
    if (A::is_inf(best)) throw InternalError("reconstruction reached an infeasible cell");
    if (best_cut < 0) {
      const QueryClass key = QueryClass::at(keys[static_cast<size_t>(h)]);
      NodeId yes = out.leaf({key});
      NodeId no = build(out, lo, hi, h + 1);
      return out.internal(Op::Eq, key.index, yes, no);
    }
    const Op op = best_cut % 2 == 1 ? Op::Lt : Op::Le;
    const int key = best_cut % 2 == 1 ? (best_cut + 1) / 2 : best_cut / 2;
    NodeId yes = build(out, lo, best_cut - 1, best_left);
    NodeId no = build(out, best_cut, hi, h - best_left);
    return out.internal(op, key, yes, no);
  }

  const Instance& instance_;
  A arith_;
  std::vector<V> weights_;
  int positions_ = 0;
  bool equality_ = false;
  std::vector<V> prefix_weight_;
  std::vector<int> prefix_present_;
  std::vector<int> prefix_keys_;
  std::vector<std::uint8_t> present_key_;
  std::vector<std::uint8_t> cut_allowed_;
  std::vector<size_t> fwd_offset_;
  std::vector<size_t> rev_offset_;
  std::vector<V> fwd_;
  std::vector<V> rev_;

 public:
  template <class F>
  void for_each_cell(F&& f) const {
    for (int lo = 0; lo < positions_; ++lo) {
      for (int hi = lo; hi < positions_; ++hi) {
        for (int h = 0; h <= keys_in(lo, hi); ++h) f(lo, hi, h, cell(lo, hi, h));
      }
    }
  }
};

std::optional<IntervalDp<PackedArith>> make_packed(const Instance& instance) {
  const int n = instance.n();
  std::vector<Rational> raw;
  for (int p = 0; p < instance.class_count(); ++p) raw.push_back(instance.weight_at(p));
  // eps coefficients reach at most sum(j) * max depth = n(n+1)/2 * 2n.
  const std::int64_t m = static_cast<std::int64_t>(n) * n * (n + 1) + 1;
  const BigInt headroom = BigInt(static_cast<long>(m)) * (2 * n + 2);
  auto scaled = scale_to_integers(raw, headroom);
  if (!scaled.fits) return std::nullopt;
  PackedArith arith;
  arith.m = m;
  arith.scale = scaled.scale;
  std::vector<std::int64_t> weights;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (!instance.present_at(p)) {
      weights.push_back(0);
      continue;
    }
    const std::int64_t eps = p % 2 == 1 ? (p + 1) / 2 : 0;
    weights.push_back(scaled.values[static_cast<size_t>(p)] * m + eps);
  }
  return IntervalDp<PackedArith>(instance, std::move(arith), std::move(weights));
}

IntervalDp<ExactArith> make_exact(const Instance& instance) {
  PerturbedInstance perturbed(instance);
  std::vector<ExactValue> weights;
  for (int p = 0; p < instance.class_count(); ++p) {
    weights.push_back({instance.present_at(p) ? perturbed.weight_at(p) : PWeight(), false});
  }
  return IntervalDp<ExactArith>(instance, ExactArith{}, std::move(weights));
}

template <class F>
auto with_dp(const Instance& instance, SolveOptions options, F&& f) {
  if (!options.force_exact) {
    if (auto packed = make_packed(instance)) {
      packed->run();
      return f(*packed);
    }
  }
  auto exact = make_exact(instance);
  exact.run();
  return f(exact);
}

}  // namespace

SubproblemSpace::SubproblemSpace(const Instance& instance) : perturbed_(instance) {}

int SubproblemSpace::key_count(const KeyInterval& interval) const {
  const Instance& inst = perturbed_.base();
  auto [first, last] = interval.positions(inst.n());
  int count = 0;
  for (int p = std::max(first, 0); p <= std::min(last, 2 * inst.n()); ++p) {
    if (p % 2 == 1 && inst.present_at(p)) ++count;
  }
  return count;
}

std::vector<int> SubproblemSpace::top_keys(const KeyInterval& interval, int h) const {
  const Instance& inst = perturbed_.base();
  if (h < 0 || h > key_count(interval)) {
    throw Error("h exceeds the number of keys in the interval");
  }
  auto [first, last] = interval.positions(inst.n());
  std::vector<int> keys;
  for (int p = std::max(first, 0); p <= std::min(last, 2 * inst.n()); ++p) {
    if (p % 2 == 1 && inst.present_at(p)) keys.push_back((p + 1) / 2);
  }
  std::sort(keys.begin(), keys.end(),
            [&](int a, int b) { return perturbed_.beta(b) < perturbed_.beta(a); });
  keys.resize(static_cast<size_t>(h));
  return keys;
}

std::vector<QueryClass> SubproblemSpace::classes_of(const SubproblemKey& sub) const {
  const Instance& inst = perturbed_.base();
  const auto top = top_keys(sub.interval, sub.h);
  auto [first, last] = sub.interval.positions(inst.n());
  std::vector<QueryClass> out;
  for (int p = std::max(first, 0); p <= std::min(last, 2 * inst.n()); ++p) {
    if (!inst.present_at(p)) continue;
    QueryClass q = QueryClass::at(p);
    if (q.is_key() && std::find(top.begin(), top.end(), q.index) != top.end()) continue;
    out.push_back(q);
  }
  return out;
}

PWeight SubproblemSpace::weight_of(const SubproblemKey& sub) const {
  PWeight total;
  for (QueryClass q : classes_of(sub)) total += perturbed_.weight(q);
  return total;
}

Solution solve(const Instance& instance, SolveOptions options) {
  return with_dp(instance, options, [&](const auto& dp) {
    const auto root = dp.root();
    using Arith = std::decay_t<decltype(dp.arith())>;
    if (Arith::is_inf(root)) {
      throw InfeasibleInstance("no tree over {" + instance.ops().to_string() +
                               "} separates every query class");
    }
    Tree tree = dp.reconstruct();
    const PWeight expected = dp.arith().to_pweight(root);
    Solution sol{tree, cost(tree, instance), perturbed_cost(tree, PerturbedInstance(instance))};
    if (sol.perturbed_cost != expected) {
      throw InternalError("reconstructed tree cost " + to_string(sol.perturbed_cost) +
                          " differs from table value " + to_string(expected));
    }
    return sol;
  });
}

CostTable::CostTable(int n, std::vector<std::optional<PWeight>> cells,
                     std::vector<std::size_t> offsets)
    : n_(n), cells_(std::move(cells)), offsets_(std::move(offsets)) {}

std::optional<PWeight> CostTable::at(int first, int last, int h) const {
  const int P = 2 * n_ + 1;
  if (last < first) return PWeight();
  if (first < 0 || last >= P) throw Error("interval outside the instance");
  auto slot = [&](int lo, int hi) {
    return offsets_[static_cast<size_t>(lo) * static_cast<size_t>(P) + static_cast<size_t>(hi)];
  };
  const size_t base = slot(first, last);
  // cells are laid out by (first, last) in row order
  size_t next = cells_.size();
  if (last + 1 < P) next = slot(first, last + 1);
  else if (first + 1 < P) next = slot(first + 1, first + 1);
  if (h < 0 || base + static_cast<size_t>(h) >= next) throw Error("h outside the subproblem");
  return cells_.at(base + static_cast<size_t>(h));
}

std::optional<PWeight> CostTable::at(const SubproblemKey& sub) const {
  auto [first, last] = sub.interval.positions(n_);
  return at(first, last, sub.h);
}

CostTable solve_cost_table(const Instance& instance, SolveOptions options) {
  return with_dp(instance, options, [&](const auto& dp) {
    using Arith = std::decay_t<decltype(dp.arith())>;
    const int P = instance.class_count();
    std::vector<std::optional<PWeight>> cells;
    std::vector<std::size_t> offsets(static_cast<size_t>(P) * static_cast<size_t>(P), 0);
    dp.for_each_cell([&](int lo, int hi, int h, const auto& v) {
      if (h == 0) offsets[static_cast<size_t>(lo) * static_cast<size_t>(P) + static_cast<size_t>(hi)] = cells.size();
      if (Arith::is_inf(v)) {
        cells.emplace_back(std::nullopt);
      } else {
        cells.emplace_back(dp.arith().to_pweight(v));
      }
    });
    return CostTable(instance.n(), std::move(cells), std::move(offsets));
  });
}

}  // namespace twcst
