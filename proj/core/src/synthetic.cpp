#include "vax/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vax/error.hpp"
#include "vax/forest.hpp"

namespace vax::synthetic {
namespace {

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

// Keeps only unambiguous rows and builds the dataset.
Dataset finish(Dataset::Columns cols) {
  const auto keep = unambiguous_rows(cols.values, cols.labels);
  if (keep.size() != cols.labels.size()) {
    std::vector<int> labels;
    for (RowIndex r : keep) labels.push_back(cols.labels[r]);
    for (auto& column : cols.values) {
      std::vector<double> kept;
      for (RowIndex r : keep) kept.push_back(column[r]);
      column = std::move(kept);
    }
    cols.labels = std::move(labels);
  }
  cols.categories.assign(cols.values.size(), {});
  return Dataset(std::move(cols));
}

}  // namespace

Dataset five_class(std::uint64_t seed, std::size_t per_class) {
  Rng rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Dataset::Columns cols;
  cols.variable_names = {"x", "y"};
  cols.classes = {"A", "B", "C", "D", "E"};
  cols.values.assign(2, {});
  auto add = [&](double x, double y, int label) {
    cols.values[0].push_back(round_to(x, 2));
    cols.values[1].push_back(round_to(y, 2));
    cols.labels.push_back(label);
  };
  for (int label = 0; label < 2; ++label)
    for (std::size_t i = 0; i < per_class; ++i) add(100 + 8 * unit(rng), 70 + 8 * unit(rng), label);
  for (std::size_t i = 0; i < per_class; ++i) add(uniform(5, 35), uniform(72, 95), 2);
  for (std::size_t i = 0; i < per_class; ++i) add(uniform(5, 35), uniform(50, 74), 3);
  for (std::size_t i = 0; i < per_class; ++i) add(60 + 5 * unit(rng), 15 + 5 * unit(rng), 4);
  return finish(std::move(cols));
}

Dataset random(std::uint64_t seed, const RandomSpec& spec) {
  if (spec.vars < 1 || spec.classes < 2 || spec.rows < spec.classes * 2)
    throw InputError("random dataset spec is too small");
  Rng rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> center(0.0, 4.0), spread(1.0, 3.0);

  std::vector<std::vector<double>> centers(spec.classes, std::vector<double>(spec.vars));
  std::vector<double> spreads(spec.classes);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (double& v : centers[c]) v = center(rng);
    spreads[c] = spread(rng);
  }

  Dataset::Columns cols;
  for (std::size_t v = 0; v < spec.vars; ++v) cols.variable_names.push_back("v" + std::to_string(v + 1));
  for (std::size_t c = 0; c < spec.classes; ++c) cols.classes.push_back("c" + std::to_string(c + 1));
  cols.values.assign(spec.vars, {});
  for (std::size_t i = 0; i < spec.rows; ++i) {
    // Round-robin first so every class is populated, random afterwards.
    const std::size_t c = i < spec.classes * 2 ? i % spec.classes
                                               : std::uniform_int_distribution<std::size_t>(0, spec.classes - 1)(rng);
    for (std::size_t v = 0; v < spec.vars; ++v)
      cols.values[v].push_back(round_to(centers[c][v] + spreads[c] * unit(rng), spec.decimals));
    cols.labels.push_back(static_cast<int>(c));
  }
  return finish(std::move(cols));
}

RandomSpec random_spec(std::uint64_t seed, std::size_t lo_rows, std::size_t hi_rows, std::size_t max_vars,
                       std::size_t max_classes) {
  Rng rng(seed);
  RandomSpec spec;
  spec.rows = std::uniform_int_distribution<std::size_t>(lo_rows, hi_rows)(rng);
  spec.vars = std::uniform_int_distribution<std::size_t>(1, max_vars)(rng);
  spec.classes = std::uniform_int_distribution<std::size_t>(2, max_classes)(rng);
  spec.decimals = std::uniform_int_distribution<int>(0, 2)(rng);
  return spec;
}

Dataset blobs(std::uint64_t seed, std::size_t groups, std::size_t per_group, std::size_t dims, double separation) {
  if (groups < 2 || per_group < 1 || dims < 1) throw InputError("blob spec is too small");
  Rng rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  Dataset::Columns cols;
  for (std::size_t v = 0; v < dims; ++v) cols.variable_names.push_back("v" + std::to_string(v + 1));
  for (std::size_t g = 0; g < groups; ++g) cols.classes.push_back("g" + std::to_string(g + 1));
  cols.values.assign(dims, {});
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = 0; i < per_group; ++i) {
      for (std::size_t v = 0; v < dims; ++v) {
        const double offset = (g > 0 && (g - 1) % dims == v) ? separation * static_cast<double>((g - 1) / dims + 1) : 0.0;
        cols.values[v].push_back(offset + unit(rng));
      }
      cols.labels.push_back(static_cast<int>(g));
    }
  }
  return finish(std::move(cols));
}

}  // namespace vax::synthetic
