#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twcst/dp2wcst.hpp"
#include "twcst/instance.hpp"
#include "twcst/pweight.hpp"

namespace twcst {

/// A node of a (generalized) binary split tree. A search for Q halts here if
/// Q equals key `eq`; otherwise it continues left when Q < K_split and right
/// when Q >= K_split. Missing children are -1.
struct GbstNode {
  int eq = 0;
  int split = 0;
  int left = -1;
  int right = -1;
};

class GbstTree {
 public:
  GbstTree() = default;
  GbstTree(std::vector<GbstNode> nodes, int root) : nodes_(std::move(nodes)), root_(root) {}

  int root() const { return root_; }
  bool empty() const { return root_ < 0; }
  const GbstNode& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
  const std::vector<GbstNode>& arena() const { return nodes_; }
  int add(GbstNode node) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size() - 1);
  }
  void set_root(int root) { root_ = root; }
  /// Reachable node ids, preorder.
  std::vector<int> preorder() const;
  int size() const { return static_cast<int>(preorder().size()); }

 private:
  std::vector<GbstNode> nodes_;
  int root_ = -1;
};

/// "(d1/5 (a2/3 ...) -)": equality key and split key index per node; "-" is
/// an empty child. Key names are used when given.
std::string to_string(const GbstTree& tree, const std::vector<std::string>& names = {});

/// Raised when a split tree does not find some key or merges two gaps.
class GbstVerifyError : public Error {
 public:
  using Error::Error;
};

/// Successful queries only: sum of beta_k times the number of nodes visited
/// when searching for k (the halting node included). beta is 1-based in
/// meaning: beta[k-1] is the weight of key k.
Rational gbst_cost(const GbstTree& tree, const std::vector<Rational>& beta);

/// Cost with gap queries too: a gap query visits nodes until it falls off
/// the tree. Every present key must be found and no two present gaps may
/// fall off at the same place.
Rational split_tree_cost(const GbstTree& tree, const Instance& instance);

/// True when every node's equality key has maximum beta among the present
/// keys reaching it (ties allowed).
bool is_split_tree(const GbstTree& tree, const Instance& instance);

/// Every equality key is a least-frequent key among the keys of its key
/// interval that are not equality keys below it.
bool lemma12_check(const GbstTree& tree, const std::vector<Rational>& beta);

struct HwResult {
  Rational cost;
  Rational weight;
  /// The tree whose cost the recurrence claims; keys deleted at the top
  /// level are absent (empty for the full problem).
  GbstTree tree;
};

/// The 1984 Huang-Wong recurrence, reproducing their published code: same
/// candidate order, same minimum selection, first lightest deleted key in
/// key order. Throws Error on an empty key set or more than 64 keys.
HwResult huang_wong(const std::vector<Rational>& beta);

struct NamedWeights {
  std::vector<std::string> names;  ///< sorted
  std::vector<Rational> beta;      ///< beta[i] belongs to names[i]
  int index_of(const std::string& name) const;  ///< 1-based, 0 when absent
};

/// The 31-key table on which the recurrence returns 1763.
NamedWeights counterexample_instance();

struct GbstSolution {
  GbstTree tree;
  Rational cost;
};

inline constexpr int kGbstSmallLimit = 16;

/// Exact optimum over all GBSTs for successful queries, memoized over
/// (key interval, deleted set).
GbstSolution optimal_gbst_small(const std::vector<Rational>& beta);

/// Moves that keep a GBST correct: re-rooting a subtree by rotation and
/// swapping equality keys along a path. Applied greedily until no move lowers
/// the cost.
GbstSolution improve_gbst(const GbstTree& start, const std::vector<Rational>& beta);

struct SplitSolution {
  GbstTree tree;
  Rational cost;
  PWeight perturbed_cost;
};

/// Optimal binary split tree: every node tests a heaviest key among the keys
/// reaching it (any of them when several tie). With distinct key weights this
/// is the O(n^4) interval DP; with ties the state also records which tied
/// keys are already used, which can grow exponentially in the tie size.
/// Throws InfeasibleInstance when no split tree separates the present gaps.
SplitSolution optimal_split_tree(const Instance& instance);

/// The interval DP run on the perturbed weights. Exact for distinct key
/// weights. With ties it only considers trees that break each tie toward the
/// higher key index, and can then miss the optimum.
SplitSolution optimal_split_tree_perturbed(const Instance& instance);

enum class ProbeSolver { HuangWong, Optimal };

struct ProbeResult {
  Rational before;
  Rational after;
  bool violated = false;  ///< delta > 0 and the cost went down
};

/// Raises beta of key `key` (1-based) by `delta` and reports both costs.
ProbeResult hw_monotonicity_probe(const std::vector<Rational>& beta, int key,
                                  const Rational& delta,
                                  ProbeSolver solver = ProbeSolver::HuangWong);

}  // namespace twcst
