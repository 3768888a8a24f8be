#include "twcst/oracle.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "twcst/dp2wcst.hpp"

namespace twcst {

namespace {

using Mask = std::uint32_t;

void check_size(const Instance& instance) {
  if (instance.n() > kBruteLimit) {
    throw Error("brute-force oracles are limited to " + std::to_string(kBruteLimit) + " keys");
  }
}

Mask present_mask(const Instance& instance) {
  Mask m = 0;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (instance.present_at(p)) m |= Mask{1} << p;
  }
  return m;
}

Mask below(int cut) { return (Mask{1} << cut) - 1; }

Rational weight_of(const Instance& instance, Mask m) {
  Rational total = 0;
  for (; m; m &= m - 1) total += instance.weight_at(std::countr_zero(m));
  return total;
}

// Allowed comparisons as (op, key) pairs.
std::vector<std::pair<Op, int>> comparisons(const Instance& instance) {
  std::vector<std::pair<Op, int>> out;
  for (int k = 1; k <= instance.n(); ++k) {
    for (Op op : {Op::Eq, Op::Lt, Op::Le}) {
      if (instance.ops().contains(op)) out.emplace_back(op, k);
    }
  }
  return out;
}

Mask yes_part(Mask set, Op op, int key) {
  if (op == Op::Eq) return set & (Mask{1} << (2 * key - 1));
  return set & below(cut_position(op, key));
}

class Brute2wcst {
 public:
  explicit Brute2wcst(const Instance& instance) : instance_(instance), moves_(comparisons(instance)) {}

  std::optional<Rational> solve(Mask set) {
    if (auto it = memo_.find(set); it != memo_.end()) return it->second.cost;
    Entry entry;
    if (std::popcount(set) <= 1) {
      entry.cost = Rational(0);
    } else {
      for (size_t i = 0; i < moves_.size(); ++i) {
        auto [op, key] = moves_[i];
        const Mask yes = yes_part(set, op, key);
        if (yes == 0 || yes == set) continue;
        auto a = solve(yes);
        auto b = solve(set & ~yes);
        if (!a || !b) continue;
        Rational c = *a + *b;
        if (!entry.cost || c < *entry.cost) {
          entry.cost = c;
          entry.move = static_cast<int>(i);
        }
      }
      if (entry.cost) *entry.cost += weight_of(instance_, set);
    }
    memo_.emplace(set, entry);
    return entry.cost;
  }

  NodeId build(TreeBuilder& out, Mask set) {
    const Entry& entry = memo_.at(set);
    if (entry.move < 0) {
      std::vector<QueryClass> classes;
      for (Mask m = set; m; m &= m - 1) classes.push_back(QueryClass::at(std::countr_zero(m)));
      return out.leaf(std::move(classes));
    }
    auto [op, key] = moves_[static_cast<size_t>(entry.move)];
    const Mask yes = yes_part(set, op, key);
    NodeId y = build(out, yes);
    NodeId n = build(out, set & ~yes);
    return out.internal(op, key, y, n);
  }

 private:
  struct Entry {
    std::optional<Rational> cost;
    int move = -1;
  };
  const Instance& instance_;
  std::vector<std::pair<Op, int>> moves_;
  std::unordered_map<Mask, Entry> memo_;
};

// Split trees (`forced` true) and GBSTs over sets of classes.
class BruteSplit {
 public:
  BruteSplit(const Instance& instance, bool forced) : instance_(instance), forced_(forced) {}

  std::optional<Rational> solve(Mask set) {
    if (auto it = memo_.find(set); it != memo_.end()) return it->second.cost;
    Entry entry;
    const Mask key_bits = set & odd_mask();
    if (set == 0 || (std::popcount(set) == 1 && key_bits == 0)) {
      entry.cost = Rational(0);
    } else if (key_bits != 0 || !forced_) {
      std::optional<Rational> heaviest;
      for (Mask m = key_bits; m; m &= m - 1) {
        const Rational& w = instance_.weight_at(std::countr_zero(m));
        if (!heaviest || w > *heaviest) heaviest = w;
      }
      std::optional<Rational> best;
      for (int e = 1; e <= instance_.n(); ++e) {
        const Mask ebit = Mask{1} << (2 * e - 1);
        const bool inside = (set & ebit) != 0;
        if (forced_ && (!inside || instance_.beta(e) != *heaviest)) continue;
        const Mask rest = set & ~ebit;
        for (int s = 1; s <= instance_.n(); ++s) {
          const Mask left = rest & below(2 * s - 1);
          const Mask right = rest & ~left;
          if (left == set || right == set) continue;
          auto a = solve(left);
          auto b = solve(right);
          if (a && b && (!best || *a + *b < *best)) {
            best = *a + *b;
            entry.e = e;
            entry.s = s;
          }
        }
      }
      if (best) entry.cost = weight_of(instance_, set) + *best;
    }
    memo_.emplace(set, entry);
    return entry.cost;
  }

  int build(GbstTree& tree, Mask set) {
    const Entry& entry = memo_.at(set);
    if (entry.e == 0) return -1;
    const Mask rest = set & ~(Mask{1} << (2 * entry.e - 1));
    const Mask left = rest & below(2 * entry.s - 1);
    const int l = build(tree, left);
    const int r = build(tree, rest & ~left);
    return tree.add(GbstNode{entry.e, entry.s, l, r});
  }

 private:
  struct Entry {
    std::optional<Rational> cost;
    int e = 0;
    int s = 0;
  };
  Mask odd_mask() const {
    Mask m = 0;
    for (int p = 1; p < instance_.class_count(); p += 2) m |= Mask{1} << p;
    return m;
  }
  const Instance& instance_;
  bool forced_;
  std::unordered_map<Mask, Entry> memo_;
};

GbstSolution run_brute_split(const Instance& instance, bool forced) {
  check_size(instance);
  BruteSplit brute(instance, forced);
  const Mask all = present_mask(instance);
  auto c = brute.solve(all);
  if (!c) throw InfeasibleInstance(forced ? "no split tree keeps the present gaps apart" : "no GBST exists");
  GbstSolution out;
  out.cost = *c;
  out.tree.set_root(brute.build(out.tree, all));
  return out;
}

class Enumerator {
 public:
  Enumerator(const Instance& instance, std::size_t limit)
      : instance_(instance), moves_(comparisons(instance)), limit_(limit) {}

  const std::vector<Tree>& trees(Mask set) {
    if (auto it = memo_.find(set); it != memo_.end()) return it->second;
    std::vector<Tree> out;
    if (std::popcount(set) <= 1) {
      std::vector<QueryClass> classes;
      for (Mask m = set; m; m &= m - 1) classes.push_back(QueryClass::at(std::countr_zero(m)));
      out.emplace_back(std::move(classes));
    } else {
      for (auto [op, key] : moves_) {
        const Mask yes = yes_part(set, op, key);
        if (yes == 0 || yes == set) continue;
        const std::vector<Tree> ys = trees(yes);
        const std::vector<Tree>& ns = trees(set & ~yes);
        if (out.size() + ys.size() * ns.size() > limit_) {
          throw Error("tree enumeration exceeds " + std::to_string(limit_) + " trees");
        }
        for (const Tree& y : ys) {
          for (const Tree& n : ns) {
            TreeBuilder b;
            NodeId yi = b.graft(y, y.root());
            NodeId ni = b.graft(n, n.root());
            out.push_back(std::move(b).build(b.internal(op, key, yi, ni)));
          }
        }
      }
    }
    return memo_.emplace(set, std::move(out)).first->second;
  }

 private:
  const Instance& instance_;
  std::vector<std::pair<Op, int>> moves_;
  std::size_t limit_;
  std::unordered_map<Mask, std::vector<Tree>> memo_;
};

}  // namespace

OracleSolution brute_2wcst(const Instance& instance) {
  check_size(instance);
  Brute2wcst brute(instance);
  const Mask all = present_mask(instance);
  auto c = brute.solve(all);
  if (!c) throw InfeasibleInstance("no tree over {" + instance.ops().to_string() + "} exists");
  TreeBuilder out;
  NodeId root = brute.build(out, all);
  return OracleSolution{std::move(out).build(root), *c};
}

GbstSolution brute_split(const Instance& instance) { return run_brute_split(instance, true); }

GbstSolution brute_gbst(const Instance& instance) { return run_brute_split(instance, false); }

std::vector<Tree> enumerate_trees(const Instance& instance, std::size_t limit) {
  check_size(instance);
  Enumerator e(instance, limit);
  return e.trees(present_mask(instance));
}

}  // namespace twcst
