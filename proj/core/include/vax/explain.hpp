#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/jep.hpp"

namespace vax {

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr std::size_t kMaxHistogramBins = 512;

// Freedman-Diaconis: width 2 * IQR * n^(-1/3), bins = ceil(range / width).
// IQR uses linearly interpolated quartiles. Returns 1 when IQR or the range
// is zero; capped at kMaxHistogramBins. Throws InputError on < 2 values.
std::size_t freedman_diaconis_bins(std::span<const double> values);

// bins + 1 strictly increasing, evenly spaced edges spanning [min, max]. A
// zero-width range is widened to [min - 0.5, min + 0.5].
std::vector<double> uniform_edges(double min, double max, std::size_t bins);

// Counts of dataset column `variable` over `rows`. The last bin is closed.
std::vector<std::size_t> bin_counts(const Dataset& dataset, std::size_t variable, std::span<const RowIndex> rows,
                                    std::span<const double> edges);

// Sum of supports of the patterns holding a selector on each variable,
// min-max normalized to [0, 1]. When every variable scores the same, all
// get 1 (or 0 if that score is 0). Throws InputError on an empty set.
std::vector<double> variable_importance(const JepSet& jeps, const Dataset& dataset);

enum class RowOrder { kSupport, kClass, kClassAndSupport };

std::optional<RowOrder> parse_row_order(std::string_view name);
std::string_view to_string(RowOrder order);

// Stable permutation of pattern indices: support descending, class order
// ascending, or class then support.
std::vector<std::size_t> order_rows(const JepSet& jeps, RowOrder key);

// Running fraction of all rows covered, reading patterns in `order`. Throws
// InputError when `order` is not a permutation of the pattern indices.
std::vector<double> cumulative_coverage(const JepSet& jeps, std::span<const std::size_t> order);

struct FilterCriteria {
  std::optional<double> min_support;
  std::optional<std::vector<int>> classes;
  std::optional<double> coverage_target;
  std::optional<std::vector<std::string>> instance_ids;
};

// Indices (in set order) of the patterns passing the filter. min_support and
// classes restrict conjunctively. Among the remaining patterns,
// coverage_target keeps the shortest support-ordered prefix reaching the
// target and instance_ids keeps the patterns supporting those instances;
// when both are given the two picks are merged. Throws InputError on an
// unknown instance id or out-of-range parameters.
std::vector<std::size_t> filter_patterns(const JepSet& jeps, const Dataset& dataset, const FilterCriteria& criteria);

// New set holding the given patterns in the given order; coverage recomputed.
JepSet subset(const JepSet& jeps, std::span<const std::size_t> indices);

struct MatrixCell {
  std::size_t variable = 0;
  bool has_selector = false;
  std::vector<std::size_t> counts;
};

struct MatrixOptions {
  RowOrder order = RowOrder::kSupport;
  std::optional<std::size_t> bins;  // overrides Freedman-Diaconis for every variable
  bool all_cells = false;           // also build cells for variables without a selector
  bool log_scale = false;           // renderer hint for the grayscale encodings
};

// View model behind the pattern matrix. Bin edges are shared per variable by
// the global and local histograms.
struct ExplanationModel {
  JepSet jeps;
  std::vector<std::vector<double>> edges;                           // [variable]
  std::vector<std::vector<std::vector<std::size_t>>> global_counts;  // [class][variable]
  std::vector<std::vector<MatrixCell>> cells;                       // [pattern], by variable
  std::vector<double> importance;
  RowOrder order = RowOrder::kSupport;
  std::vector<std::size_t> row_order;
  std::vector<double> cumulative_coverage;  // along row_order
  std::vector<std::size_t> column_order;    // importance descending
  bool log_scale = false;
};

ExplanationModel build_matrix_model(const JepSet& jeps, const Dataset& dataset, const MatrixOptions& options = {});

}  // namespace vax
