#include "twcst/gbst.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <unordered_map>

namespace twcst {

std::vector<int> GbstTree::preorder() const {
  std::vector<int> order;
  if (root_ < 0) return order;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const GbstNode& nd = node(id);
    if (nd.right >= 0) stack.push_back(nd.right);
    if (nd.left >= 0) stack.push_back(nd.left);
  }
  return order;
}

namespace {

std::string key_name(int k, const std::vector<std::string>& names) {
  if (k >= 1 && static_cast<size_t>(k) <= names.size()) return names[static_cast<size_t>(k - 1)];
  return "K" + std::to_string(k);
}

void write_gbst(const GbstTree& tree, int id, const std::vector<std::string>& names,
                std::string& out) {
  if (id < 0) {
    out += "-";
    return;
  }
  const GbstNode& nd = tree.node(id);
  out += "(" + key_name(nd.eq, names) + " <" + key_name(nd.split, names) + " ";
  write_gbst(tree, nd.left, names, out);
  out += " ";
  write_gbst(tree, nd.right, names, out);
  out += ")";
}

// Visits needed to resolve a class at `position`, or nullopt if a key class
// is never found. `exit` receives the fall-off point for gaps.
std::optional<int> trace(const GbstTree& tree, int position, long* exit) {
  const bool is_key = position % 2 == 1;
  const int key = (position + 1) / 2;
  int visits = 0;
  int id = tree.root();
  long where = -1;
  while (id >= 0) {
    ++visits;
    const GbstNode& nd = tree.node(id);
    if (is_key && nd.eq == key) return visits;
    const bool left = position < 2 * nd.split - 1;
    where = 2L * id + (left ? 0 : 1);
    id = left ? nd.left : nd.right;
  }
  if (is_key) return std::nullopt;
  if (exit) *exit = where;
  return visits;
}

}  // namespace

std::string to_string(const GbstTree& tree, const std::vector<std::string>& names) {
  std::string out;
  write_gbst(tree, tree.root(), names, out);
  return out;
}

Rational gbst_cost(const GbstTree& tree, const std::vector<Rational>& beta) {
  Rational total = 0;
  for (size_t i = 0; i < beta.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    auto visits = trace(tree, 2 * k - 1, nullptr);
    if (!visits) throw GbstVerifyError("key K" + std::to_string(k) + " is not found by the tree");
    total += beta[i] * *visits;
  }
  return total;
}

Rational split_tree_cost(const GbstTree& tree, const Instance& instance) {
  Rational total = 0;
  std::map<long, int> exits;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (!instance.present_at(p)) continue;
    long exit = -2;
    auto visits = trace(tree, p, &exit);
    if (!visits) throw GbstVerifyError(to_string(QueryClass::at(p)) + " is not found by the tree");
    if (p % 2 == 0) {
      auto [it, fresh] = exits.emplace(exit, p);
      if (!fresh) {
        throw GbstVerifyError(to_string(QueryClass::at(it->second)) + " and " +
                              to_string(QueryClass::at(p)) + " end at the same place");
      }
    }
    total += instance.weight_at(p) * *visits;
  }
  return total;
}

bool is_split_tree(const GbstTree& tree, const Instance& instance) {
  if (tree.empty()) return true;
  std::vector<std::pair<int, std::vector<int>>> stack;
  std::vector<int> all;
  for (int p = 0; p < instance.class_count(); ++p) {
    if (instance.present_at(p)) all.push_back(p);
  }
  stack.emplace_back(tree.root(), std::move(all));
  while (!stack.empty()) {
    auto [id, set] = std::move(stack.back());
    stack.pop_back();
    const GbstNode& nd = tree.node(id);
    std::optional<Rational> best;
    bool has_eq = false;
    for (int p : set) {
      if (p % 2 == 0) continue;
      const Rational& b = instance.weight_at(p);
      if (!best || b > *best) best = b;
      has_eq = has_eq || (p + 1) / 2 == nd.eq;
    }
    if (!has_eq || instance.beta(nd.eq) != *best) return false;
    std::vector<int> left, right;
    for (int p : set) {
      if (p == 2 * nd.eq - 1) continue;
      (p < 2 * nd.split - 1 ? left : right).push_back(p);
    }
    if (nd.left >= 0) stack.emplace_back(nd.left, std::move(left));
    if (nd.right >= 0) stack.emplace_back(nd.right, std::move(right));
  }
  return true;
}

bool lemma12_check(const GbstTree& tree, const std::vector<Rational>& beta) {
  if (tree.empty()) return true;
  const int n = static_cast<int>(beta.size());
  // equality keys strictly below each node
  std::vector<std::uint64_t> below(tree.arena().size(), 0);
  auto order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const GbstNode& nd = tree.node(*it);
    std::uint64_t m = 0;
    for (int c : {nd.left, nd.right}) {
      if (c >= 0) m |= below[static_cast<size_t>(c)] | (1ULL << (tree.node(c).eq - 1));
    }
    below[static_cast<size_t>(*it)] = m;
  }
  struct Item {
    int id, lo, hi;
  };
  std::vector<Item> stack{{tree.root(), 1, n}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    const GbstNode& nd = tree.node(item.id);
    if (nd.eq < item.lo || nd.eq > item.hi) return false;
    for (int k = item.lo; k <= item.hi; ++k) {
      if (below[static_cast<size_t>(item.id)] >> (k - 1) & 1ULL) continue;
      if (beta[static_cast<size_t>(k - 1)] < beta[static_cast<size_t>(nd.eq - 1)]) return false;
    }
    if (nd.left >= 0) stack.push_back({nd.left, item.lo, std::min(item.hi, nd.split - 1)});
    if (nd.right >= 0) stack.push_back({nd.right, std::max(item.lo, nd.split), item.hi});
  }
  return true;
}

namespace {

template <class T>
class HuangWong {
 public:
  explicit HuangWong(std::vector<T> beta) : beta_(std::move(beta)), n_(static_cast<int>(beta_.size())) {
    offset_.assign(static_cast<size_t>((n_ + 1) * (n_ + 1)), 0);
    size_t total = 0;
    for (int i = 0; i <= n_; ++i) {
      for (int j = i; j <= n_; ++j) {
        offset_[idx(i, j)] = total;
        total += static_cast<size_t>(j - i + 1);
      }
    }
    cells_.resize(total);
  }

  void run() {
    for (int len = 0; len <= n_; ++len) {
      for (int i = 0; i + len <= n_; ++i) {
        const int j = i + len;
        for (int d = len; d >= 0; --d) fill(i, j, d);
      }
    }
  }

  T cost() const { return cell(0, n_, 0).cost; }
  T weight() const { return cell(0, n_, 0).weight; }

  GbstTree extract() const {
    GbstTree tree;
    tree.set_root(build(tree, 0, n_, 0));
    return tree;
  }

 private:
  struct Cell {
    T cost{};
    T weight{};
    std::uint64_t deleted = 0;
    int k = 0;
    int m = 0;
    int x = 0;
  };

  size_t idx(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(n_ + 1) + static_cast<size_t>(j);
  }
  const Cell& cell(int i, int j, int d) const { return cells_[offset_[idx(i, j)] + static_cast<size_t>(d)]; }
  Cell& cell(int i, int j, int d) { return cells_[offset_[idx(i, j)] + static_cast<size_t>(d)]; }
  static bool legal(int i, int j, int d, int n) { return 0 <= i && i <= j && j <= n && 0 <= d && d <= j - i; }

  void fill(int i, int j, int d) {
    Cell& out = cell(i, j, d);
    if (d == j - i) {
      out.deleted = 0;
      for (int key = i + 1; key <= j; ++key) out.deleted |= 1ULL << (key - 1);
      return;
    }
    bool have = false;
    for (int k = i + 1; k <= j; ++k) {
      for (int m = 0; m <= d + 1; ++m) {
        if (!legal(i, k - 1, m, n_) || !legal(k - 1, j, d - m + 1, n_)) continue;
        const Cell& l = cell(i, k - 1, m);
        const Cell& r = cell(k - 1, j, d - m + 1);
        const std::uint64_t deleted = l.deleted | r.deleted;
        int x = 0;
        for (std::uint64_t rest = deleted; rest; rest &= rest - 1) {
          const int key = std::countr_zero(rest) + 1;
          if (x == 0 || beta_[static_cast<size_t>(key - 1)] < beta_[static_cast<size_t>(x - 1)]) x = key;
        }
        T weight = beta_[static_cast<size_t>(x - 1)] + l.weight + r.weight;
        T cost = weight + l.cost + r.cost;
        const std::uint64_t left_over = deleted & ~(1ULL << (x - 1));
        // Tuple order (cost, weight, set); sets compare by proper inclusion.
        bool better = !have || cost < out.cost ||
                      (cost == out.cost &&
                       (weight < out.weight ||
                        (weight == out.weight && (left_over & ~out.deleted) == 0 &&
                         left_over != out.deleted)));
        if (better) {
          have = true;
          out.cost = cost;
          out.weight = weight;
          out.deleted = left_over;
          out.k = k;
          out.m = m;
          out.x = x;
        }
      }
    }
  }

  int build(GbstTree& tree, int i, int j, int d) const {
    if (d == j - i) return -1;
    const Cell& c = cell(i, j, d);
    const int left = build(tree, i, c.k - 1, c.m);
    const int right = build(tree, c.k - 1, j, d - c.m + 1);
    return tree.add(GbstNode{c.x, c.k, left, right});
  }

  std::vector<T> beta_;
  int n_;
  std::vector<size_t> offset_;
  std::vector<Cell> cells_;
};

}  // namespace

HwResult huang_wong(const std::vector<Rational>& beta) {
  const int n = static_cast<int>(beta.size());
  if (n == 0) throw Error("huang_wong needs at least one key");
  if (n > 64) throw Error("huang_wong supports at most 64 keys");
  for (const auto& b : beta) {
    if (b < 0) throw Error("weights must be nonnegative");
  }
  auto scaled = scale_to_integers(beta, BigInt(2 * n + 2));
  if (scaled.fits) {
    HuangWong<std::int64_t> hw(scaled.values);
    hw.run();
    const Rational scale(scaled.scale);
    return HwResult{Rational(BigInt(static_cast<long>(hw.cost()))) / scale,
                    Rational(BigInt(static_cast<long>(hw.weight()))) / scale, hw.extract()};
  }
  HuangWong<Rational> hw(beta);
  hw.run();
  return HwResult{hw.cost(), hw.weight(), hw.extract()};
}

int NamedWeights::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? 0 : static_cast<int>(it - names.begin()) + 1;
}

NamedWeights counterexample_instance() {
  const std::map<std::string, int> table{
      {"b4", 20}, {"a3", 20}, {"v3", 20}, {"a2", 20}, {"p2", 20}, {"t2", 20}, {"x2", 20},
      {"a1", 20}, {"d1", 22}, {"n1", 20}, {"q1", 20}, {"s1", 20}, {"u1", 20}, {"w1", 20},
      {"y1", 20}, {"b0", 10}, {"c0", 5},  {"d0", 10}, {"e0", 10}, {"n0", 10}, {"p0", 10},
      {"q0", 10}, {"r0", 10}, {"s0", 10}, {"t0", 10}, {"u0", 10}, {"v0", 10}, {"w0", 10},
      {"x0", 10}, {"y0", 10}, {"z0", 10}};
  NamedWeights out;
  for (const auto& [name, w] : table) {
    out.names.push_back(name);
    out.beta.emplace_back(w);
  }
  return out;
}

namespace {

class GbstSmall {
 public:
  explicit GbstSmall(const std::vector<Rational>& beta) : beta_(beta), n_(static_cast<int>(beta.size())) {}

  Rational solve(int i, int j, std::uint64_t deleted) {
    const std::uint64_t key = pack(i, j, deleted);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    const std::uint64_t remaining = range(i, j) & ~deleted;
    Entry entry;
    const int count = std::popcount(remaining);
    if (count == 0) {
      entry.cost = 0;
    } else if (count == 1) {
      entry.e = std::countr_zero(remaining) + 1;
      entry.s = entry.e;
      entry.cost = beta_[static_cast<size_t>(entry.e - 1)];
    } else {
      Rational omega = 0;
      for (std::uint64_t r = remaining; r; r &= r - 1) omega += beta_[static_cast<size_t>(std::countr_zero(r))];
      std::optional<Rational> best;
      // keys still present first, so a wasted test only wins when strictly cheaper
      std::vector<int> order;
      for (int e = 1; e <= n_; ++e) if (remaining >> (e - 1) & 1ULL) order.push_back(e);
      for (int e = 1; e <= n_; ++e) if (!(remaining >> (e - 1) & 1ULL)) order.push_back(e);
      for (int e : order) {
        const std::uint64_t del = deleted | (range(i, j) & (1ULL << (e - 1)));
        for (int s = 1; s <= n_; ++s) {
          const int li = i, lj = std::min(j, s - 1);
          const int ri = std::max(i, s), rj = j;
          const std::uint64_t lmask = range(li, lj);
          const std::uint64_t rmask = range(ri, rj);
          if ((lmask & ~del) == remaining || (rmask & ~del) == remaining) continue;
          Rational c = solve(li, lj, del & lmask) + solve(ri, rj, del & rmask);
          if (!best || c < *best) {
            best = c;
            entry.e = e;
            entry.s = s;
          }
        }
      }
      entry.cost = omega + *best;
    }
    memo_[key] = entry;
    return entry.cost;
  }

  int build(GbstTree& tree, int i, int j, std::uint64_t deleted) {
    solve(i, j, deleted);
    const Entry& entry = memo_.at(pack(i, j, deleted));
    const std::uint64_t remaining = range(i, j) & ~deleted;
    if (remaining == 0) return -1;
    if (std::popcount(remaining) == 1) return tree.add(GbstNode{entry.e, entry.s, -1, -1});
    const int e = entry.e, s = entry.s;
    const std::uint64_t del = deleted | (range(i, j) & (1ULL << (e - 1)));
    const int lj = std::min(j, s - 1), ri = std::max(i, s);
    const int left = build(tree, i, lj, del & range(i, lj));
    const int right = build(tree, ri, j, del & range(ri, j));
    return tree.add(GbstNode{e, s, left, right});
  }

 private:
  struct Entry {
    Rational cost;
    int e = 0;
    int s = 0;
  };
  static std::uint64_t range(int i, int j) {
    if (j < i) return 0;
    const std::uint64_t upto = j >= 64 ? ~0ULL : ((1ULL << j) - 1);
    return upto & ~((1ULL << (i - 1)) - 1);
  }
  static std::uint64_t pack(int i, int j, std::uint64_t deleted) {
    return (deleted << 14) | (static_cast<std::uint64_t>(i) << 7) | static_cast<std::uint64_t>(j);
  }

  const std::vector<Rational>& beta_;
  int n_;
  std::unordered_map<std::uint64_t, Entry> memo_;
};

}  // namespace

GbstSolution optimal_gbst_small(const std::vector<Rational>& beta) {
  const int n = static_cast<int>(beta.size());
  if (n == 0) return GbstSolution{GbstTree(), Rational(0)};
  if (n > kGbstSmallLimit) {
    throw Error("optimal_gbst_small is limited to " + std::to_string(kGbstSmallLimit) + " keys");
  }
  GbstSmall solver(beta);
  GbstSolution out;
  out.cost = solver.solve(1, n, 0);
  out.tree.set_root(solver.build(out.tree, 1, n, 0));
  return out;
}

namespace {

std::optional<Rational> try_cost(const GbstTree& tree, const std::vector<Rational>& beta) {
  try {
    return gbst_cost(tree, beta);
  } catch (const GbstVerifyError&) {
    return std::nullopt;
  }
}

// Candidate neighbours of `tree`: equality-key swaps between any two nodes,
// any new split key at a node, and single rotations.
std::vector<GbstTree> neighbours(const GbstTree& tree, int n) {
  std::vector<GbstTree> out;
  const auto ids = tree.preorder();
  for (size_t a = 0; a < ids.size(); ++a) {
    for (size_t b = a + 1; b < ids.size(); ++b) {
      GbstTree t = tree;
      auto nodes = t.arena();
      std::swap(nodes[static_cast<size_t>(ids[a])].eq, nodes[static_cast<size_t>(ids[b])].eq);
      out.emplace_back(std::move(nodes), tree.root());
    }
  }
  for (int id : ids) {
    for (int s = 1; s <= n; ++s) {
      if (s == tree.node(id).split) continue;
      auto nodes = tree.arena();
      nodes[static_cast<size_t>(id)].split = s;
      out.emplace_back(std::move(nodes), tree.root());
    }
  }
  for (int id : ids) {
    const GbstNode& u = tree.node(id);
    for (bool right_rotation : {true, false}) {
      const int child = right_rotation ? u.left : u.right;
      if (child < 0) continue;
      auto nodes = tree.arena();
      int parent = -1;
      for (int other : ids) {
        if (tree.node(other).left == id || tree.node(other).right == id) parent = other;
      }
      GbstNode& p = nodes[static_cast<size_t>(id)];
      GbstNode& c = nodes[static_cast<size_t>(child)];
      if (right_rotation) {
        p.left = c.right;
        c.right = id;
      } else {
        p.right = c.left;
        c.left = id;
      }
      int root = tree.root();
      if (parent < 0) {
        root = child;
      } else {
        GbstNode& up = nodes[static_cast<size_t>(parent)];
        (up.left == id ? up.left : up.right) = child;
      }
      out.emplace_back(std::move(nodes), root);
    }
  }
  return out;
}

}  // namespace

GbstSolution improve_gbst(const GbstTree& start, const std::vector<Rational>& beta) {
  auto current_cost = try_cost(start, beta);
  if (!current_cost) throw GbstVerifyError("local search needs a tree that finds every key");
  GbstTree current = start;
  const int n = static_cast<int>(beta.size());
  for (;;) {
    std::optional<std::pair<GbstTree, Rational>> best;
    for (auto& t : neighbours(current, n)) {
      auto c = try_cost(t, beta);
      if (c && *c < *current_cost && (!best || *c < best->second)) best.emplace(std::move(t), *c);
    }
    if (!best) break;
    current = std::move(best->first);
    current_cost = best->second;
  }
  return GbstSolution{std::move(current), *current_cost};
}

ProbeResult hw_monotonicity_probe(const std::vector<Rational>& beta, int key, const Rational& delta,
                                  ProbeSolver solver) {
  if (key < 1 || static_cast<size_t>(key) > beta.size()) throw Error("probe key out of range");
  auto run = [&](const std::vector<Rational>& b) {
    return solver == ProbeSolver::HuangWong ? huang_wong(b).cost : optimal_gbst_small(b).cost;
  };
  std::vector<Rational> raised = beta;
  raised[static_cast<size_t>(key - 1)] += delta;
  ProbeResult out;
  out.before = run(beta);
  out.after = run(raised);
  out.violated = delta > 0 && out.after < out.before;
  return out;
}

}  // namespace twcst
