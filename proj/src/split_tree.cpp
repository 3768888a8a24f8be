#include <algorithm>
#include <climits>
#include <optional>
#include <unordered_map>

#include "twcst/gbst.hpp"

namespace twcst {

namespace {

// Subproblems are (lo, hi, h): the present classes at positions lo..hi minus
// the h heaviest keys among them, which sit as equality keys further up.
class SplitDp {
 public:
  explicit SplitDp(const Instance& instance) : instance_(instance), perturbed_(instance) {
    P_ = instance.class_count();
    prefix_keys_.assign(static_cast<size_t>(P_ + 1), 0);
    for (int p = 0; p < P_; ++p) {
      const bool key = p % 2 == 1 && instance.present_at(p);
      prefix_keys_[static_cast<size_t>(p + 1)] = prefix_keys_[static_cast<size_t>(p)] + (key ? 1 : 0);
    }
    offset_.assign(static_cast<size_t>(P_ * P_), 0);
    size_t total = 0;
    for (int lo = 0; lo < P_; ++lo) {
      for (int hi = lo; hi < P_; ++hi) {
        offset_[idx(lo, hi)] = total;
        total += static_cast<size_t>(keys_in(lo, hi) + 1);
      }
    }
    cells_.resize(total);
  }

  std::optional<PWeight> solve(int lo, int hi, int h) {
    if (hi < lo) return PWeight();
    Cell& cell = cells_[offset_[idx(lo, hi)] + static_cast<size_t>(h)];
    if (cell.done) return cell.value;
    const auto order = heaviest(lo, hi);
    std::vector<int> rest;
    for (int p = lo; p <= hi; ++p) {
      if (!instance_.present_at(p)) continue;
      if (p % 2 == 1 && std::find(order.begin(), order.begin() + h, p) != order.begin() + h) continue;
      rest.push_back(p);
    }
    const int keys = static_cast<int>(order.size()) - h;
    std::optional<PWeight> value;
    if (rest.empty() || (rest.size() == 1 && rest.front() % 2 == 0)) {
      value = PWeight();
    } else if (keys > 0) {
      const int e = order[static_cast<size_t>(h)];
      PWeight omega;
      for (int p : rest) omega += perturbed_.weight_at(p);
      std::optional<PWeight> best;
      std::vector<int> top(order.begin(), order.begin() + h + 1);
      std::sort(top.begin(), top.end());
      int top_left = 0;
      for (int s = 1; s <= instance_.n(); ++s) {
        const int c = 2 * s - 1;
        while (top_left <= h && top[static_cast<size_t>(top_left)] < c) ++top_left;
        std::optional<PWeight> sum;
        if (c <= lo || c > hi) {
          sum = solve(lo, hi, h + 1);
        } else {
          auto l = solve(lo, c - 1, top_left);
          auto r = solve(c, hi, h + 1 - top_left);
          if (l && r) sum = *l + *r;
        }
        if (sum && (!best || *sum < *best)) {
          best = sum;
          cell.split = s;
        }
      }
      cell.eq = (e + 1) / 2;
      if (best) value = omega + *best;
    }
    cell.done = true;
    cell.value = value;
    return value;
  }

  int build(GbstTree& tree, int lo, int hi, int h) {
    if (hi < lo) return -1;
    solve(lo, hi, h);
    const Cell& cell = cells_[offset_[idx(lo, hi)] + static_cast<size_t>(h)];
    if (cell.eq == 0) return -1;
    const auto order = heaviest(lo, hi);
    const int c = 2 * cell.split - 1;
    int left = -1;
    int right = -1;
    if (c <= lo) {
      right = build(tree, lo, hi, h + 1);
    } else if (c > hi) {
      left = build(tree, lo, hi, h + 1);
    } else {
      int top_left = 0;
      for (int t = 0; t <= h; ++t) top_left += order[static_cast<size_t>(t)] < c ? 1 : 0;
      left = build(tree, lo, c - 1, top_left);
      right = build(tree, c, hi, h + 1 - top_left);
    }
    return tree.add(GbstNode{cell.eq, cell.split, left, right});
  }

 private:
  struct Cell {
    bool done = false;
    std::optional<PWeight> value;
    int eq = 0;
    int split = 0;
  };

  size_t idx(int a, int b) const { return static_cast<size_t>(a) * static_cast<size_t>(P_) + static_cast<size_t>(b); }
  int keys_in(int lo, int hi) const {
    return prefix_keys_[static_cast<size_t>(hi + 1)] - prefix_keys_[static_cast<size_t>(lo)];
  }
  // Present key positions in lo..hi, heaviest first under the perturbed order.
  std::vector<int> heaviest(int lo, int hi) const {
    std::vector<int> keys;
    for (int p = lo; p <= hi; ++p) {
      if (p % 2 == 1 && instance_.present_at(p)) keys.push_back(p);
    }
    std::sort(keys.begin(), keys.end(),
              [&](int a, int b) { return perturbed_.weight_at(b) < perturbed_.weight_at(a); });
    return keys;
  }

  const Instance& instance_;
  PerturbedInstance perturbed_;
  int P_ = 0;
  std::vector<int> prefix_keys_;
  std::vector<size_t> offset_;
  std::vector<Cell> cells_;
};

}  // namespace

namespace {

// Same recurrence over (lo, hi, D) with D the keys of lo..hi already used
// higher up. Every heaviest key of a tie is tried, so no tie order is
// imposed; with distinct weights D is always a top-h set and the state space
// matches SplitDp.
class TieSplitDp {
 public:
  explicit TieSplitDp(const Instance& instance) : instance_(instance) {}

  std::optional<Rational> solve(int lo, int hi, std::uint64_t used) {
    if (hi < lo) return Rational(0);
    const Key key{lo, hi, used};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    Entry entry;
    std::vector<int> rest;
    std::optional<Rational> heaviest;
    Rational omega = 0;
    for (int p = lo; p <= hi; ++p) {
      if (!instance_.present_at(p)) continue;
      if (p % 2 == 1 && (used >> ((p - 1) / 2) & 1ULL)) continue;
      rest.push_back(p);
      omega += instance_.weight_at(p);
      if (p % 2 == 1 && (!heaviest || instance_.weight_at(p) > *heaviest)) heaviest = instance_.weight_at(p);
    }
    if (rest.empty() || (rest.size() == 1 && rest.front() % 2 == 0)) {
      entry.cost = Rational(0);
    } else if (heaviest) {
      std::optional<Rational> best;
      for (int p : rest) {
        if (p % 2 == 0 || instance_.weight_at(p) != *heaviest) continue;
        const std::uint64_t with_e = used | (1ULL << ((p - 1) / 2));
        for (int s = 1; s <= instance_.n(); ++s) {
          const int c = 2 * s - 1;
          std::optional<Rational> l, r;
          if (c <= lo || c > hi) {
            l = solve(lo, hi, with_e);
            r = Rational(0);
          } else {
            l = solve(lo, c - 1, with_e & keys_mask(lo, c - 1));
            r = solve(c, hi, with_e & keys_mask(c, hi));
          }
          if (l && r && (!best || *l + *r < *best)) {
            best = *l + *r;
            entry.e = (p + 1) / 2;
            entry.s = s;
          }
        }
      }
      if (best) entry.cost = omega + *best;
    }
    memo_.emplace(key, entry);
    return entry.cost;
  }

  int build(GbstTree& tree, int lo, int hi, std::uint64_t used) {
    if (hi < lo) return -1;
    solve(lo, hi, used);
    const Entry& entry = memo_.at(Key{lo, hi, used});
    if (entry.e == 0) return -1;
    const std::uint64_t with_e = used | (1ULL << (entry.e - 1));
    const int c = 2 * entry.s - 1;
    int left = -1;
    int right = -1;
    if (c <= lo) {
      right = build(tree, lo, hi, with_e);
    } else if (c > hi) {
      left = build(tree, lo, hi, with_e);
    } else {
      left = build(tree, lo, c - 1, with_e & keys_mask(lo, c - 1));
      right = build(tree, c, hi, with_e & keys_mask(c, hi));
    }
    return tree.add(GbstNode{entry.e, entry.s, left, right});
  }

 private:
  struct Key {
    int lo, hi;
    std::uint64_t used;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>()(k.used * 0x9e3779b97f4a7c15ULL ^
                                        (static_cast<std::uint64_t>(k.lo) << 8 | static_cast<std::uint64_t>(k.hi)));
    }
  };
  struct Entry {
    std::optional<Rational> cost;
    int e = 0;
    int s = 0;
  };
  // Bits of the keys whose positions lie in lo..hi.
  static std::uint64_t keys_mask(int lo, int hi) {
    const int first = (lo + 1) / 2 + (lo % 2 == 0 ? 1 : 0);  // smallest key index with 2k-1 >= lo
    const int last = (hi + 1) / 2;                             // largest key index with 2k-1 <= hi
    if (last < first) return 0;
    const std::uint64_t upto = last >= 64 ? ~0ULL : ((1ULL << last) - 1);
    return upto & ~((1ULL << (first - 1)) - 1);
  }

  const Instance& instance_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
};

bool distinct_key_weights(const Instance& instance) {
  std::vector<Rational> seen;
  for (int i = 1; i <= instance.n(); ++i) {
    if (instance.present(QueryClass::key(i))) seen.push_back(instance.beta(i));
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

}  // namespace

SplitSolution optimal_split_tree_perturbed(const Instance& instance) {
  SplitDp dp(instance);
  const int last = instance.class_count() - 1;
  auto value = dp.solve(0, last, 0);
  if (!value) throw InfeasibleInstance("no split tree keeps the present gaps apart");
  SplitSolution out;
  out.tree.set_root(dp.build(out.tree, 0, last, 0));
  out.perturbed_cost = *value;
  out.cost = split_tree_cost(out.tree, instance);
  if (out.cost != value->real) {
    throw InternalError("split tree cost " + to_string(out.cost) + " differs from table value " +
                        to_string(value->real));
  }
  return out;
}

SplitSolution optimal_split_tree(const Instance& instance) {
  if (distinct_key_weights(instance)) return optimal_split_tree_perturbed(instance);
  if (instance.n() > 64) throw Error("tied key weights are supported up to 64 keys");
  TieSplitDp dp(instance);
  const int last = instance.class_count() - 1;
  auto value = dp.solve(0, last, 0);
  if (!value) throw InfeasibleInstance("no split tree keeps the present gaps apart");
  SplitSolution out;
  out.tree.set_root(dp.build(out.tree, 0, last, 0));
  out.cost = split_tree_cost(out.tree, instance);
  out.perturbed_cost = PWeight(out.cost);
  if (out.cost != *value) {
    throw InternalError("split tree cost " + to_string(out.cost) + " differs from table value " +
                        to_string(*value));
  }
  return out;
}

}  // namespace twcst
