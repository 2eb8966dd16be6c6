#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/pattern.hpp"

namespace vax {

using Rng = std::mt19937_64;

// Independent stream for tree `tree_index` of a forest seeded with
// `master_seed`. Trees can be grown in any order or in parallel and still
// come out identical.
Rng tree_rng(std::uint64_t master_seed, std::size_t tree_index);

// Number of variables drawn at each internal node: ceil(log2 M), and 1 when
// M <= 2.
std::size_t candidate_subset_size(std::size_t n_vars);

struct TreeNode {
  // Internal nodes: rows with value <= threshold go left, the rest right.
  int variable = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Leaves: the class shared by every row reaching the leaf.
  int class_id = -1;
  std::vector<RowIndex> rows;

  bool is_leaf() const { return variable < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Unpruned decision tree grown on every row of the dataset. nodes[0] is the
// root; leaves are class-pure and their row sets partition the dataset.
struct TreeModel {
  std::vector<TreeNode> nodes;
  std::uint64_t seed = 0;
  std::size_t index = 0;

  std::size_t leaf_count() const;
  std::size_t depth() const;
  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

// CART-style induction until every leaf is pure. At each node a random
// subset of candidate_subset_size(M) variables is drawn without replacement;
// the split minimizing weighted Gini impurity over midpoints of consecutive
// distinct values wins (ties: lower variable index, then lower threshold).
// When none of the drawn variables varies within the node, more variables
// are drawn one at a time until one does. Throws ConsistencyError if an
// impure node cannot be split at all (ambiguous rows).
TreeModel induct_tree(const Dataset& dataset, Rng& rng);

// Pattern read off one root-to-leaf path.
struct RawPattern {
  std::size_t id = 0;
  Selectors selectors;
  int class_id = 0;
  std::vector<RowIndex> rows;  // ascending
};

// One pattern per leaf, in depth-first left-to-right order. Per variable on
// the path, "<= t" constraints give the upper bound t and "> t" constraints
// give the smallest dataset value above t as lower bound; the open side is
// closed at the variable's data range. Variables off the path get no
// selector.
std::vector<RawPattern> extract_patterns(const TreeModel& tree, const Dataset& dataset);

// Grows trees 0..k-1 of a seeded forest, keeping every extracted pattern.
// Growing to k and later to 2k yields exactly the patterns of a fresh run
// with 2k trees.
class ForestMiner {
 public:
  ForestMiner(const Dataset& dataset, std::uint64_t seed);

  void grow_to(std::size_t trees);
  std::size_t tree_count() const { return trees_; }
  const std::vector<RawPattern>& patterns() const { return patterns_; }
  std::vector<RawPattern> release() { return std::move(patterns_); }

 private:
  const Dataset& dataset_;
  std::uint64_t seed_;
  std::size_t trees_ = 0;
  std::vector<std::vector<double>> sorted_values_;
  std::vector<RawPattern> patterns_;
};

// Patterns of k seeded random trees, concatenated in tree order with ids
// 0..|P|-1. Throws InputError when k == 0.
std::vector<RawPattern> mine(const Dataset& dataset, std::size_t trees, std::uint64_t seed);

}  // namespace vax
