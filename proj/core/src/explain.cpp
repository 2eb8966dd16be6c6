#include "vax/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vax/error.hpp"

namespace vax {
namespace {

// Linearly interpolated quantile of sorted data (position q * (n - 1)).
double quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::size_t freedman_diaconis_bins(std::span<const double> values) {
  if (values.size() < 2) throw InputError("freedman-diaconis: need at least 2 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  if (range <= 0.0 || iqr <= 0.0) return 1;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  const double bins = std::ceil(range / width);
  return static_cast<std::size_t>(std::clamp(bins, 1.0, static_cast<double>(kMaxHistogramBins)));
}

std::vector<double> uniform_edges(double min, double max, std::size_t bins) {
  if (bins == 0) throw InputError("histogram: need at least one bin");
  if (!(max > min)) {
    min -= 0.5;
    max += 0.5;
  }
  std::vector<double> edges(bins + 1);
  const double width = (max - min) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = min + static_cast<double>(i) * width;
  edges.back() = max;
  return edges;
}

std::vector<std::size_t> bin_counts(const Dataset& dataset, std::size_t variable, std::span<const RowIndex> rows,
                                    std::span<const double> edges) {
  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (RowIndex r : rows) {
    const double x = dataset.value(r, variable);
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, x);
    ++counts[static_cast<std::size_t>(it - (edges.begin() + 1))];
  }
  return counts;
}

std::vector<double> variable_importance(const JepSet& jeps, const Dataset& dataset) {
  if (jeps.patterns.empty()) throw InputError("importance: empty pattern set");
  std::vector<double> score(dataset.n_vars(), 0.0);
  for (const auto& p : jeps.patterns)
    for (const auto& s : p.selectors) score[s.variable] += p.support;
  auto [lo, hi] = std::minmax_element(score.begin(), score.end());
  const double min = *lo, max = *hi;
  for (double& x : score) {
    if (max > min) {
      x = (x - min) / (max - min);
    } else {
      x = max > 0.0 ? 1.0 : 0.0;
    }
  }
  return score;
}

std::optional<RowOrder> parse_row_order(std::string_view name) {
  if (name == "support") return RowOrder::kSupport;
  if (name == "class") return RowOrder::kClass;
  if (name == "class_and_support") return RowOrder::kClassAndSupport;
  return std::nullopt;
}

std::string_view to_string(RowOrder order) {
  switch (order) {
    case RowOrder::kSupport: return "support";
    case RowOrder::kClass: return "class";
    case RowOrder::kClassAndSupport: return "class_and_support";
  }
  return "support";
}

std::vector<std::size_t> order_rows(const JepSet& jeps, RowOrder key) {
  std::vector<std::size_t> idx(jeps.patterns.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto& p = jeps.patterns;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    switch (key) {
      case RowOrder::kSupport:
        return p[a].support > p[b].support;
      case RowOrder::kClass:
        return p[a].class_id < p[b].class_id;
      case RowOrder::kClassAndSupport:
        if (p[a].class_id != p[b].class_id) return p[a].class_id < p[b].class_id;
        return p[a].support > p[b].support;
    }
    return false;
  });
  return idx;
}

std::vector<double> cumulative_coverage(const JepSet& jeps, std::span<const std::size_t> order) {
  const std::size_t n = jeps.patterns.size();
  if (order.size() != n) throw InputError("coverage: order length does not match the pattern count");
  std::vector<char> seen(n, 0);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw InputError("coverage: order is not a permutation");
    seen[i] = 1;
  }
  std::vector<double> out;
  out.reserve(n);
  std::size_t covered = 0;
  for (std::size_t i : order) {
    covered += jeps.patterns[i].rows.size();
    out.push_back(static_cast<double>(covered) / static_cast<double>(jeps.n_rows));
  }
  return out;
}

std::vector<std::size_t> filter_patterns(const JepSet& jeps, const Dataset& dataset, const FilterCriteria& c) {
  if (c.min_support && !(*c.min_support >= 0.0 && *c.min_support <= 1.0))
    throw InputError("filter: min_support must lie in [0, 1]");
  if (c.coverage_target && !(*c.coverage_target > 0.0 && *c.coverage_target <= 1.0))
    throw InputError("filter: coverage_target must lie in (0, 1]");
  std::set<int> classes;
  if (c.classes) {
    for (int k : *c.classes) {
      if (k < 0 || static_cast<std::size_t>(k) >= dataset.n_classes())
        throw InputError("filter: unknown class index " + std::to_string(k));
      classes.insert(k);
    }
  }
  std::vector<char> wanted_rows;
  if (c.instance_ids) {
    wanted_rows.assign(dataset.n_rows(), 0);
    for (const auto& id : *c.instance_ids) {
      auto row = dataset.row_of(id);
      if (!row) throw InputError("filter: unknown instance id '" + id + "'");
      wanted_rows[*row] = 1;
    }
  }

  std::vector<std::size_t> base;
  for (std::size_t i = 0; i < jeps.patterns.size(); ++i) {
    const auto& p = jeps.patterns[i];
    if (c.min_support && p.support < *c.min_support) continue;
    if (c.classes && !classes.contains(p.class_id)) continue;
    base.push_back(i);
  }
  if (!c.coverage_target && !c.instance_ids) return base;

  std::vector<char> keep(jeps.patterns.size(), 0);
  if (c.coverage_target) {
    std::vector<std::size_t> by_support = base;
    std::stable_sort(by_support.begin(), by_support.end(), [&](std::size_t a, std::size_t b) {
      return jeps.patterns[a].support > jeps.patterns[b].support;
    });
    std::size_t covered = 0;
    for (std::size_t i : by_support) {
      if (static_cast<double>(covered) / static_cast<double>(jeps.n_rows) >= *c.coverage_target) break;
      keep[i] = 1;
      covered += jeps.patterns[i].rows.size();
    }
  }
  if (c.instance_ids) {
    for (std::size_t i : base) {
      const auto& rows = jeps.patterns[i].rows;
      if (std::any_of(rows.begin(), rows.end(), [&](RowIndex r) { return wanted_rows[r] != 0; })) keep[i] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i : base)
    if (keep[i]) out.push_back(i);
  return out;
}

JepSet subset(const JepSet& jeps, std::span<const std::size_t> indices) {
  JepSet out;
  out.n_rows = jeps.n_rows;
  for (std::size_t i : indices) out.patterns.push_back(jeps.patterns.at(i));
  refresh_coverage(out);
  return out;
}

ExplanationModel build_matrix_model(const JepSet& jeps, const Dataset& dataset, const MatrixOptions& options) {
  ExplanationModel model;
  model.jeps = jeps;
  model.order = options.order;
  model.log_scale = options.log_scale;
  const std::size_t m = dataset.n_vars();

  model.edges.resize(m);
  for (std::size_t v = 0; v < m; ++v) {
    const std::size_t bins = options.bins ? *options.bins : freedman_diaconis_bins(dataset.column(v));
    const Range& r = dataset.variable_ranges()[v];
    model.edges[v] = uniform_edges(r.min, r.max, bins);
  }

  model.global_counts.resize(dataset.n_classes());
  for (std::size_t k = 0; k < dataset.n_classes(); ++k) {
    const auto members = partition(dataset, static_cast<int>(k)).members;
    for (std::size_t v = 0; v < m; ++v) model.global_counts[k].push_back(bin_counts(dataset, v, members, model.edges[v]));
  }

  model.cells.resize(jeps.patterns.size());
  for (std::size_t i = 0; i < jeps.patterns.size(); ++i) {
    const Pattern& p = jeps.patterns[i];
    for (std::size_t v = 0; v < m; ++v) {
      const bool has = find_selector(p.selectors, v) != nullptr;
      if (!has && !options.all_cells) continue;
      model.cells[i].push_back({v, has, bin_counts(dataset, v, p.rows, model.edges[v])});
    }
  }

  if (!jeps.patterns.empty()) {
    model.importance = variable_importance(jeps, dataset);
  } else {
    model.importance.assign(m, 0.0);
  }
  model.row_order = order_rows(jeps, options.order);
  model.cumulative_coverage = jeps.n_rows ? cumulative_coverage(jeps, model.row_order) : std::vector<double>{};
  model.column_order.resize(m);
  std::iota(model.column_order.begin(), model.column_order.end(), std::size_t{0});
  std::stable_sort(model.column_order.begin(), model.column_order.end(),
                   [&](std::size_t a, std::size_t b) { return model.importance[a] > model.importance[b]; });
  return model;
}

}  // namespace vax
