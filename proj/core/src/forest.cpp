#include "vax/forest.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "vax/error.hpp"

namespace vax {
namespace {

using Wide = __int128;

// Weighted Gini impurity is minimized by maximizing
//   sum_c cL^2 / nL + sum_c cR^2 / nR  =  num / den
// with num = SL*nR + SR*nL and den = nL*nR, all integers. Comparing as
// fractions keeps tie-breaking exact.
struct Split {
  int variable = -1;
  double threshold = 0.0;
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool valid() const { return variable >= 0; }
};

bool better(const Split& a, const Split& b) {
  if (!b.valid()) return a.valid();
  if (!a.valid()) return false;
  const Wide lhs = Wide(a.num) * b.den, rhs = Wide(b.num) * a.den;
  if (lhs != rhs) return lhs > rhs;
  if (a.variable != b.variable) return a.variable < b.variable;
  return a.threshold < b.threshold;
}

class SplitFinder {
 public:
  SplitFinder(const Dataset& d) : dataset_(d), left_(d.n_classes()), right_(d.n_classes()) {}

  // Best split of `rows` on `variable`; invalid when the variable is constant
  // within the rows.
  Split best_on(std::size_t variable, std::span<const RowIndex> rows) {
    pairs_.clear();
    for (RowIndex r : rows) pairs_.emplace_back(dataset_.value(r, variable), dataset_.label(r));
    std::sort(pairs_.begin(), pairs_.end());
    Split best;
    if (pairs_.front().first == pairs_.back().first) return best;

    std::fill(left_.begin(), left_.end(), 0);
    std::fill(right_.begin(), right_.end(), 0);
    for (const auto& p : pairs_) ++right_[static_cast<std::size_t>(p.second)];
    std::int64_t sum_left = 0, sum_right = 0;
    for (auto c : right_) sum_right += c * c;

    const std::int64_t n = static_cast<std::int64_t>(pairs_.size());
    for (std::int64_t i = 0; i + 1 < n; ++i) {
      const auto y = static_cast<std::size_t>(pairs_[i].second);
      // Moving one row of class y from right to left.
      sum_left += 2 * left_[y] + 1;
      ++left_[y];
      sum_right -= 2 * right_[y] - 1;
      --right_[y];
      const double a = pairs_[i].first, b = pairs_[i + 1].first;
      if (a == b) continue;
      const std::int64_t n_left = i + 1, n_right = n - n_left;
      Split s;
      s.variable = static_cast<int>(variable);
      s.threshold = a + (b - a) / 2;
      if (!(s.threshold < b)) s.threshold = a;
      s.num = sum_left * n_right + sum_right * n_left;
      s.den = n_left * n_right;
      if (better(s, best)) best = s;
    }
    return best;
  }

 private:
  const Dataset& dataset_;
  std::vector<std::pair<double, int>> pairs_;
  std::vector<std::int64_t> left_, right_;
};

bool is_pure(const Dataset& d, std::span<const RowIndex> rows) {
  const int y = d.label(rows.front());
  return std::all_of(rows.begin(), rows.end(), [&](RowIndex r) { return d.label(r) == y; });
}

std::vector<std::vector<double>> sorted_distinct_columns(const Dataset& d) {
  std::vector<std::vector<double>> out(d.n_vars());
  for (std::size_t v = 0; v < d.n_vars(); ++v) {
    auto col = d.column(v);
    out[v].assign(col.begin(), col.end());
    std::sort(out[v].begin(), out[v].end());
    out[v].erase(std::unique(out[v].begin(), out[v].end()), out[v].end());
  }
  return out;
}

std::vector<RawPattern> extract_with(const TreeModel& tree, const Dataset& dataset,
                                     const std::vector<std::vector<double>>& sorted_values) {
  std::vector<RawPattern> out;
  if (tree.nodes.empty()) return out;
  const std::size_t m = dataset.n_vars();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Per variable: strongest "> t" and "<= t" seen along the current path.
  struct Bounds {
    double above = -kInf;
    double at_most = kInf;
  };
  struct Frame {
    std::int32_t node;
    std::vector<Bounds> bounds;
  };
  std::vector<Frame> stack;
  stack.push_back({0, std::vector<Bounds>(m)});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(f.node)];
    if (node.is_leaf()) {
      RawPattern p;
      p.class_id = node.class_id;
      p.rows = node.rows;
      for (std::size_t v = 0; v < m; ++v) {
        const Bounds& b = f.bounds[v];
        if (b.above == -kInf && b.at_most == kInf) continue;
        const Range& range = dataset.variable_ranges()[v];
        Interval iv{range.min, range.max};
        if (b.above != -kInf) {
          const auto& vals = sorted_values[v];
          auto it = std::upper_bound(vals.begin(), vals.end(), b.above);
          if (it == vals.end()) throw ConsistencyError("extract: split threshold above every value");
          iv.low = *it;
        }
        if (b.at_most != kInf) iv.high = b.at_most;
        p.selectors.push_back({v, iv});
      }
      out.push_back(std::move(p));
      continue;
    }
    const auto var = static_cast<std::size_t>(node.variable);
    Frame right{node.right, f.bounds};
    right.bounds[var].above = std::max(right.bounds[var].above, node.threshold);
    f.bounds[var].at_most = std::min(f.bounds[var].at_most, node.threshold);
    f.node = node.left;
    stack.push_back(std::move(right));
    stack.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Rng tree_rng(std::uint64_t master_seed, std::size_t tree_index) {
  const auto idx = static_cast<std::uint64_t>(tree_index);
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32), 0x7a11u};
  return Rng(seq);
}

std::size_t candidate_subset_size(std::size_t n_vars) {
  if (n_vars <= 2) return 1;
  // ceil(log2 M) == bit width of M - 1.
  return static_cast<std::size_t>(std::bit_width(n_vars - 1));
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    deepest = std::max(deepest, d);
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return deepest;
}

TreeModel induct_tree(const Dataset& dataset, Rng& rng) {
  const std::size_t m = dataset.n_vars();
  const std::size_t subset = candidate_subset_size(m);
  SplitFinder finder(dataset);
  std::vector<std::size_t> perm(m);

  TreeModel tree;
  std::vector<RowIndex> all(dataset.n_rows());
  std::iota(all.begin(), all.end(), RowIndex{0});

  struct Pending {
    std::int32_t node;
    std::vector<RowIndex> rows;
  };
  tree.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, std::move(all)});

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    auto node_at = [&]() -> TreeNode& { return tree.nodes[static_cast<std::size_t>(job.node)]; };

    if (is_pure(dataset, job.rows)) {
      node_at().class_id = dataset.label(job.rows.front());
      node_at().rows = std::move(job.rows);
      continue;
    }

    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Split best;
    std::size_t drawn = 0;
    while (drawn < m && (drawn < subset || !best.valid())) {
      std::uniform_int_distribution<std::size_t> pick(drawn, m - 1);
      std::swap(perm[drawn], perm[pick(rng)]);
      const Split s = finder.best_on(perm[drawn], job.rows);
      if (better(s, best)) best = s;
      ++drawn;
    }
    if (!best.valid())
      throw ConsistencyError("induct: impure node with identical rows (dataset is not ambiguity-free)");

    std::vector<RowIndex> left_rows, right_rows;
    for (RowIndex r : job.rows)
      (dataset.value(r, static_cast<std::size_t>(best.variable)) <= best.threshold ? left_rows : right_rows)
          .push_back(r);

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = node_at();
    node.variable = best.variable;
    node.threshold = best.threshold;
    node.left = left;
    node.right = left + 1;
    stack.push_back({left + 1, std::move(right_rows)});
    stack.push_back({left, std::move(left_rows)});
  }
  return tree;
}

std::vector<RawPattern> extract_patterns(const TreeModel& tree, const Dataset& dataset) {
  return extract_with(tree, dataset, sorted_distinct_columns(dataset));
}

ForestMiner::ForestMiner(const Dataset& dataset, std::uint64_t seed)
    : dataset_(dataset), seed_(seed), sorted_values_(sorted_distinct_columns(dataset)) {}

void ForestMiner::grow_to(std::size_t trees) {
  if (trees <= trees_) return;
  const std::size_t first = trees_;
  std::vector<std::vector<RawPattern>> slots(trees - first);
  detail::parallel_for(slots.size(), [&](std::size_t i) {
    Rng rng = tree_rng(seed_, first + i);
    TreeModel tree = induct_tree(dataset_, rng);
    slots[i] = extract_with(tree, dataset_, sorted_values_);
  });
  for (auto& slot : slots) {
    for (auto& p : slot) {
      p.id = patterns_.size();
      patterns_.push_back(std::move(p));
    }
  }
  trees_ = trees;
}

std::vector<RawPattern> mine(const Dataset& dataset, std::size_t trees, std::uint64_t seed) {
  if (trees == 0) throw InputError("mine: number of trees must be at least 1");
  ForestMiner miner(dataset, seed);
  miner.grow_to(trees);
  return miner.release();
}

}  // namespace vax
