#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/embed.hpp"
#include "vax/forest.hpp"
#include "vax/jep.hpp"

namespace vax {

// What the 2-D map distances are compared against when scoring stress.
enum class StressReference {
  // the lambda-weighted matrix itself, no rescaling
  kWeighted,
  // z-scored original data, map rescaled by the least-squares factor
  kOriginal,
};

struct EmbeddingResult {
  double lambda = 0.0;
  Matrix coordinates;  // N x 2
  double stress = 0.0;
  double silhouette_inverted = 0.0;
};

struct LambdaSweep {
  std::vector<EmbeddingResult> curve;  // grid order
  std::size_t recommended = 0;         // index into curve
  double recommended_lambda() const { return curve.at(recommended).lambda; }
};

// 0, 0.05, ..., 1.
std::vector<double> default_lambda_grid();

// One map at `lambda`: weight, classical MDS, stress against `reference`,
// sc' of the JEP groups in the weighted space.
EmbeddingResult embed_at(const ExtendedDataset& extended, double lambda,
                         StressReference reference = StressReference::kWeighted);

// Maps over the grid, computed in parallel. The recommendation minimizes
// stress + sc' over the grid; ties go to the first grid point. Throws InputError on an empty grid, lambda outside [0, 1], or fewer than
// two groups.
LambdaSweep sweep_lambda(const Dataset& dataset, const JepSet& jeps, std::span<const double> grid,
                         StressReference reference = StressReference::kWeighted);

struct TreeSweepPoint {
  std::size_t trees = 0;
  double coverage = 0.0;
  std::size_t raw_patterns = 0;
  std::size_t selected = 0;
};

struct TreeSweep {
  std::vector<TreeSweepPoint> curve;
  std::size_t chosen_trees = 0;
  bool full_coverage = false;
  std::vector<RawPattern> raw;  // patterns of the chosen forest
  Selection selection;          // selection over `raw`
};

// 2, 4, ..., 16384.
std::vector<std::size_t> default_tree_schedule();

// Grows one forest along the schedule and selects JEPs at each step, stopping
// at the first full cover. Without one, the first forest size reaching the
// best coverage is chosen. Throws InputError unless the schedule is nonempty
// and strictly increasing from at least 1.
TreeSweep sweep_trees(const Dataset& dataset, std::span<const std::size_t> schedule, std::uint64_t seed);

}  // namespace vax
