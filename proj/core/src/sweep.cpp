#include "vax/sweep.hpp"

#include <string>

#include "parallel.hpp"
#include "vax/error.hpp"

namespace vax {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

EmbeddingResult embed_at(const ExtendedDataset& extended, double lambda, StressReference reference) {
  EmbeddingResult result;
  result.lambda = lambda;
  const Matrix weighted = weight(extended, lambda);
  result.coordinates = mds(weighted, 2);
  const Matrix weighted_distances = pairwise_distances(weighted);
  const std::vector<double> low = condensed(pairwise_distances(result.coordinates));
  if (reference == StressReference::kOriginal) {
    const std::vector<double> high = condensed(pairwise_distances(zscore(extended.base)));
    result.stress = scaled_kruskal_stress(high, low);
  } else {
    result.stress = kruskal_stress(condensed(weighted_distances), low);
  }
  result.silhouette_inverted = 1.0 - (silhouette(weighted_distances, extended.groups) + 1.0) / 2.0;
  return result;
}

LambdaSweep sweep_lambda(const Dataset& dataset, const JepSet& jeps, std::span<const double> grid,
                         StressReference reference) {
  if (grid.empty()) throw InputError("lambda grid is empty");
  for (double lambda : grid)
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda grid value outside [0, 1]: " + std::to_string(lambda));
  const ExtendedDataset extended = extend(dataset, jeps);
  if (extended.group_count < 2) throw InputError("lambda sweep needs at least two groups");

  LambdaSweep sweep;
  sweep.curve.resize(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) { sweep.curve[i] = embed_at(extended, grid[i], reference); });

  for (std::size_t i = 1; i < sweep.curve.size(); ++i) {
    const auto& a = sweep.curve[i];
    const auto& b = sweep.curve[sweep.recommended];
    if (a.stress + a.silhouette_inverted < b.stress + b.silhouette_inverted) sweep.recommended = i;
  }
  return sweep;
}

std::vector<std::size_t> default_tree_schedule() {
  std::vector<std::size_t> schedule;
  for (std::size_t k = 2; k <= 16384; k *= 2) schedule.push_back(k);
  return schedule;
}

TreeSweep sweep_trees(const Dataset& dataset, std::span<const std::size_t> schedule, std::uint64_t seed) {
  if (schedule.empty()) throw InputError("tree schedule is empty");
  if (schedule.front() < 1) throw InputError("tree schedule must start at 1 or more");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw InputError("tree schedule must be strictly increasing");

  TreeSweep out;
  ForestMiner miner(dataset, seed);
  std::size_t best_covered = 0;
  std::size_t chosen_raw = 0;
  bool have_best = false;
  for (std::size_t trees : schedule) {
    miner.grow_to(trees);
    Selection selection = select_and_aggregate(miner.patterns(), dataset);
    std::size_t covered = 0;
    for (const auto& p : selection.jeps.patterns) covered += p.rows.size();
    out.curve.push_back({trees, selection.jeps.coverage, miner.patterns().size(), selection.stats.selected});
    if (!have_best || covered > best_covered) {
      have_best = true;
      best_covered = covered;
      out.chosen_trees = trees;
      chosen_raw = miner.patterns().size();
      out.selection = std::move(selection);
    }
    if (covered == dataset.n_rows()) {
      out.full_coverage = true;
      break;
    }
  }
  out.raw = miner.release();
  out.raw.resize(chosen_raw);
  return out;
}

}  // namespace vax
