#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vax/dataset.hpp"

namespace vax {

// Closed real interval [low, high].
struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double x) const { return low <= x && x <= high; }
  bool empty() const { return low > high; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// v_variable in [low, high].
struct Selector {
  std::size_t variable = 0;
  Interval interval;
  friend bool operator==(const Selector&, const Selector&) = default;
};

// A conjunction of selectors, sorted by variable with at most one selector
// per variable. The empty conjunction is satisfied by every row.
using Selectors = std::vector<Selector>;

bool satisfies(const Dataset& dataset, std::size_t row, const Selectors& selectors);

// Rows of the dataset (ascending) satisfying every selector.
std::vector<RowIndex> matching_rows(const Dataset& dataset, const Selectors& selectors);

// Number of rows in `rows` satisfying every selector.
std::size_t count_matching(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> rows);

// Variable-wise intersection. A variable constrained by only one side is
// intersected with the variable's full data range [min, max]. Throws
// ConsistencyError when an intersection comes out empty.
Selectors intersect(const Selectors& a, const Selectors& b, const Dataset& dataset);

const Selector* find_selector(const Selectors& selectors, std::size_t variable);

}  // namespace vax
