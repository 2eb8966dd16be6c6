#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/forest.hpp"
#include "vax/pattern.hpp"

namespace vax {

inline constexpr double kInfiniteGrowth = std::numeric_limits<double>::infinity();

// Supp(X_i, p) = count(X_i, p) / |X_i|. Throws InputError on an empty
// partition.
double support(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> partition);

// Growth rate from the two supports: 0 when both are 0, infinity when only
// the complement support is 0, otherwise target / complement.
double growth_rate(double target_support, double complement_support);

// Growth rate of a pattern from `complement` to `target`. Throws InputError
// when the partitions overlap or either is empty.
double growth_rate(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> target,
                   std::span<const RowIndex> complement);

// count(target) / (count(target) + count(complement)). Throws InputError when
// the pattern supports no row at all.
double confidence(std::size_t target_count, std::size_t complement_count);
double confidence(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> target,
                  std::span<const RowIndex> complement);

// 2x2 table of pattern support against class membership.
struct ContingencyTable {
  std::uint64_t supported_target = 0;
  std::uint64_t supported_other = 0;
  std::uint64_t unsupported_target = 0;
  std::uint64_t unsupported_other = 0;
};

// One-sided Fisher exact test for over-representation of the target class
// among supported rows: P(X >= supported_target) under the hypergeometric
// law with the table's margins. Throws InputError when the target or the
// other column is empty.
double fisher_exact(const ContingencyTable& table);

ContingencyTable contingency(std::size_t supported_target, std::size_t supported_total, std::size_t class_size,
                             std::size_t n_rows);

// Aggregated pattern with cached metrics.
struct Pattern {
  std::size_t id = 0;  // id of the pivot raw pattern
  Selectors selectors;
  int class_id = 0;
  std::vector<RowIndex> rows;  // ascending
  double support = 0.0;        // relative to the class partition
  double growth_rate = 0.0;
  double confidence = 0.0;
  double fet_p = 1.0;
  std::size_t aggregated_from = 1;  // raw patterns merged, pivot included
};

// Selected JEPs in selection order. Row sets are pairwise disjoint.
struct JepSet {
  std::vector<Pattern> patterns;
  std::vector<double> cumulative_coverage;  // fraction of all rows, list order
  double coverage = 0.0;
  std::size_t n_rows = 0;
};

struct SelectionStats {
  std::size_t raw = 0;
  std::size_t selected = 0;    // pivots
  std::size_t aggregated = 0;  // raw patterns merged into a pivot
  std::size_t discarded = 0;
  std::vector<double> pivot_supports;  // raw support of each pivot, selection order
};

struct Selection {
  JepSet jeps;
  SelectionStats stats;
};

// Merges two patterns supporting the same rows: selectors are intersected
// per variable, a selector present on one side only is intersected with the
// variable's data range. Keeps the first pattern's id and sums
// aggregated_from. Throws ConsistencyError when the row sets differ or an
// intersection is empty.
Pattern aggregate_selectors(const Pattern& pivot, const Pattern& other, const Dataset& dataset);

// Greedy selection and aggregation. Raw patterns are visited by decreasing
// class support (ties: larger row count, lower class index, lower id). A
// candidate with confidence below 1 or touching an already claimed row is
// discarded; otherwise it becomes a pivot, claims its rows, and absorbs every
// remaining raw pattern with exactly the same row set.
Selection select_and_aggregate(std::span<const RawPattern> raw, const Dataset& dataset);

// Fills support, growth rate, confidence and FET p-value from the rows.
void compute_metrics(Pattern& pattern, const Dataset& dataset);

// Recomputes cumulative coverage and total coverage in list order.
void refresh_coverage(JepSet& jeps);

RawPattern as_raw(const Pattern& pattern);

}  // namespace vax
