#include "vax/pattern.hpp"

#include <algorithm>
#include <string>

#include "vax/error.hpp"

namespace vax {

bool satisfies(const Dataset& dataset, std::size_t row, const Selectors& selectors) {
  return std::all_of(selectors.begin(), selectors.end(), [&](const Selector& s) {
    return s.interval.contains(dataset.value(row, s.variable));
  });
}

std::vector<RowIndex> matching_rows(const Dataset& dataset, const Selectors& selectors) {
  std::vector<RowIndex> rows;
  for (std::size_t i = 0; i < dataset.n_rows(); ++i)
    if (satisfies(dataset, i, selectors)) rows.push_back(static_cast<RowIndex>(i));
  return rows;
}

std::size_t count_matching(const Dataset& dataset, const Selectors& selectors, std::span<const RowIndex> rows) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](RowIndex r) { return satisfies(dataset, r, selectors); }));
}

const Selector* find_selector(const Selectors& selectors, std::size_t variable) {
  auto it = std::lower_bound(selectors.begin(), selectors.end(), variable,
                             [](const Selector& s, std::size_t v) { return s.variable < v; });
  return it != selectors.end() && it->variable == variable ? &*it : nullptr;
}

Selectors intersect(const Selectors& a, const Selectors& b, const Dataset& dataset) {
  Selectors out;
  out.reserve(a.size() + b.size());
  auto full = [&](std::size_t v) {
    const Range& r = dataset.variable_ranges()[v];
    return Interval{r.min, r.max};
  };
  auto meet = [](const Interval& x, const Interval& y) {
    return Interval{std::max(x.low, y.low), std::min(x.high, y.high)};
  };
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    Selector s;
    if (ib == b.end() || (ia != a.end() && ia->variable < ib->variable)) {
      s = {ia->variable, meet(ia->interval, full(ia->variable))};
      ++ia;
    } else if (ia == a.end() || ib->variable < ia->variable) {
      s = {ib->variable, meet(ib->interval, full(ib->variable))};
      ++ib;
    } else {
      s = {ia->variable, meet(ia->interval, ib->interval)};
      ++ia;
      ++ib;
    }
    if (s.interval.empty())
      throw ConsistencyError("aggregate: empty intersection on variable " + std::to_string(s.variable));
    out.push_back(s);
  }
  return out;
}

}  // namespace vax
