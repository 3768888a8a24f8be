#include <algorithm>
#include <cstdint>
#include <queue>
#include <utility>

#include "twcst/approx.hpp"
#include "twcst/dp2wcst.hpp"

namespace twcst {

namespace {

// Hu-Tucker combination phase. Leaves are "squares" until merged; merged
// nodes ("circles") are transparent. Two nodes may merge when no square lies
// strictly between them, so the candidates form blocks bounded by
// consecutive squares; each block keeps its circles in a leftist heap.
template <class T>
class HuTucker {
 public:
  explicit HuTucker(const std::vector<T>& weights) : m_(static_cast<int>(weights.size())) {
    const auto total = static_cast<size_t>(2 * m_);
    weight_.assign(weights.begin(), weights.end());
    weight_.resize(total);
    slot_.resize(total);
    parent_.assign(total, -1);
    left_.assign(total, -1);
    right_.assign(total, -1);
    dist_.assign(total, 1);
    for (int i = 0; i < m_; ++i) slot_[static_cast<size_t>(i)] = i;
    // squares are leaves 0..m-1; -1 and m are sentinels
    prev_.resize(static_cast<size_t>(m_ + 2));
    next_.resize(static_cast<size_t>(m_ + 2));
    for (int i = -1; i <= m_; ++i) {
      prev_[b(i)] = i - 1;
      next_[b(i)] = i + 1;
    }
    heap_.assign(static_cast<size_t>(m_ + 2), -1);
    version_.assign(static_cast<size_t>(m_ + 2), 0);
    alive_.assign(static_cast<size_t>(m_ + 2), 1);
    alive_[b(m_)] = 0;
  }

  std::vector<int> depths() {
    if (m_ == 1) return {0};
    for (int l = -1; l < m_; ++l) schedule(l);
    int next_id = m_;
    while (next_id < 2 * m_ - 1) {
      Entry e = queue_.top();
      queue_.pop();
      if (!alive_[b(e.block)] || version_[b(e.block)] != e.version) continue;
      merge(e, next_id++);
    }
    std::vector<int> depth(static_cast<size_t>(next_id), 0);
    for (int id = next_id - 2; id >= 0; --id) {
      depth[static_cast<size_t>(id)] = depth[static_cast<size_t>(parent_[static_cast<size_t>(id)])] + 1;
    }
    depth.resize(static_cast<size_t>(m_));
    return depth;
  }

 private:
  struct Entry {
    T sum;
    int first;
    int second;
    int a;
    int b;
    int block;
    std::uint64_t version;
    bool operator>(const Entry& o) const {
      if (sum != o.sum) return o.sum < sum;
      if (first != o.first) return first > o.first;
      return second > o.second;
    }
  };

  static size_t b(int l) { return static_cast<size_t>(l + 1); }

  bool before(int x, int y) const {
    const T& wx = weight_[static_cast<size_t>(x)];
    const T& wy = weight_[static_cast<size_t>(y)];
    if (wx != wy) return wx < wy;
    return slot_[static_cast<size_t>(x)] < slot_[static_cast<size_t>(y)];
  }

  int meld(int x, int y) {
    if (x < 0) return y;
    if (y < 0) return x;
    if (before(y, x)) std::swap(x, y);
    auto sx = static_cast<size_t>(x);
    right_[sx] = meld(right_[sx], y);
    const int dl = left_[sx] < 0 ? 0 : dist_[static_cast<size_t>(left_[sx])];
    const int dr = dist_[static_cast<size_t>(right_[sx])];
    if (dl < dr) std::swap(left_[sx], right_[sx]);
    dist_[sx] = 1 + std::min(dl, dr);
    return x;
  }

  int pop(int root) {
    auto s = static_cast<size_t>(root);
    int rest = meld(left_[s], right_[s]);
    left_[s] = right_[s] = -1;
    dist_[s] = 1;
    return rest;
  }

  int second_of(int root) const {
    if (root < 0) return -1;
    const int l = left_[static_cast<size_t>(root)];
    const int r = right_[static_cast<size_t>(root)];
    if (l < 0) return r;
    if (r < 0) return l;
    return before(l, r) ? l : r;
  }

  void schedule(int l) {
    ++version_[b(l)];
    int cand[4];
    int count = 0;
    if (l >= 0) cand[count++] = l;
    if (next_[b(l)] < m_) cand[count++] = next_[b(l)];
    const int root = heap_[b(l)];
    if (root >= 0) {
      cand[count++] = root;
      if (int s = second_of(root); s >= 0) cand[count++] = s;
    }
    if (count < 2) return;
    std::sort(cand, cand + count, [&](int x, int y) { return before(x, y); });
    int x = cand[0];
    int y = cand[1];
    if (slot_[static_cast<size_t>(y)] < slot_[static_cast<size_t>(x)]) std::swap(x, y);
    queue_.push(Entry{weight_[static_cast<size_t>(x)] + weight_[static_cast<size_t>(y)],
                      slot_[static_cast<size_t>(x)], slot_[static_cast<size_t>(y)], x, y, l,
                      version_[b(l)]});
  }

  bool is_square(int id) const { return id < m_ && parent_[static_cast<size_t>(id)] < 0; }

  void remove_square(int s) {
    const int p = prev_[b(s)];
    const int q = next_[b(s)];
    heap_[b(p)] = meld(heap_[b(p)], heap_[b(s)]);
    heap_[b(s)] = -1;
    alive_[b(s)] = 0;
    next_[b(p)] = q;
    prev_[b(q)] = p;
  }

  void merge(const Entry& e, int id) {
    int block = e.block;
    const bool a_square = is_square(e.a);
    const bool b_square = is_square(e.b);
    // circles are the two smallest heap entries at most, so popping removes them
    int circles = (a_square ? 0 : 1) + (b_square ? 0 : 1);
    if (circles == 2) {
      heap_[b(block)] = pop(pop_keep(block));
    } else if (circles == 1) {
      const int c = a_square ? e.b : e.a;
      int& h = heap_[b(block)];
      if (h == c) {
        h = pop(h);
      } else {
        const int root = h;
        h = pop(pop(root));
        h = meld(h, root);
      }
    }
    const auto si = static_cast<size_t>(id);
    weight_[si] = weight_[static_cast<size_t>(e.a)] + weight_[static_cast<size_t>(e.b)];
    slot_[si] = e.first;
    parent_[static_cast<size_t>(e.a)] = id;
    parent_[static_cast<size_t>(e.b)] = id;
    if (a_square) {
      if (e.a == block) block = prev_[b(block)];
      remove_square(e.a);
    }
    if (b_square) {
      if (e.b == block) block = prev_[b(block)];
      remove_square(e.b);
    }
    heap_[b(block)] = meld(heap_[b(block)], id);
    schedule(block);
  }

  // Pops the root and returns the remaining heap; the caller pops again.
  int pop_keep(int block) { return pop(heap_[b(block)]); }

  int m_;
  std::vector<T> weight_;
  std::vector<int> slot_;
  std::vector<int> parent_;
  std::vector<int> left_, right_, dist_;
  std::vector<int> prev_, next_;
  std::vector<int> heap_;
  std::vector<std::uint64_t> version_;
  std::vector<std::uint8_t> alive_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue_;
};

}  // namespace

std::vector<int> alphabetic_depths(const std::vector<std::int64_t>& weights) {
  if (weights.empty()) throw Error("alphabetic tree needs at least one leaf");
  return HuTucker<std::int64_t>(weights).depths();
}

std::vector<int> alphabetic_depths(const std::vector<Rational>& weights) {
  if (weights.empty()) throw Error("alphabetic tree needs at least one leaf");
  for (const auto& w : weights) {
    if (w < 0) throw Error("alphabetic weights must be nonnegative");
  }
  auto scaled = scale_to_integers(weights, BigInt(2));
  if (scaled.fits) return HuTucker<std::int64_t>(scaled.values).depths();
  return HuTucker<Rational>(weights).depths();
}

Tree tree_from_depths(const std::vector<int>& depths) {
  struct Item {
    int depth;
    NodeId node;
    int first;
  };
  TreeBuilder builder;
  std::vector<Item> stack;
  for (size_t i = 0; i < depths.size(); ++i) {
    const int leaf = static_cast<int>(i) + 1;
    stack.push_back({depths[i], builder.leaf({QueryClass::key(leaf)}), leaf});
    while (stack.size() >= 2 && stack[stack.size() - 1].depth == stack[stack.size() - 2].depth) {
      Item right = stack.back();
      stack.pop_back();
      Item left = stack.back();
      stack.pop_back();
      if (right.depth == 0) throw InternalError("leaf depths do not form a tree");
      stack.push_back({right.depth - 1, builder.internal(Op::Lt, right.first, left.node, right.node),
                       left.first});
    }
  }
  if (stack.size() != 1 || stack.front().depth != 0) {
    throw InternalError("leaf depths do not form a tree");
  }
  return std::move(builder).build(stack.front().node);
}

Tree alphabetic_tree(const AlphabeticProblem& problem) {
  return tree_from_depths(alphabetic_depths(problem.weights));
}

Instance alphabetic_instance(const AlphabeticProblem& problem) {
  const int m = static_cast<int>(problem.weights.size());
  return Instance::with_default_keys(OpSet{Op::Lt}, problem.weights,
                                     std::vector<Rational>(static_cast<size_t>(m + 1), Rational(0)),
                                     QueryVariant::SuccessfulOnly);
}

}  // namespace twcst
