#pragma once

#include <cstddef>
#include <cstdint>

#include "vax/dataset.hpp"

namespace vax::synthetic {

// Five classes over two variables (x, y), `per_class` rows each:
//   A, B  overlapping Gaussians around (100, 70)
//   C, D  adjacent uniform boxes stacked in y
//   E     isolated Gaussian around (60, 15)
// Values are rounded to 0.01; ambiguous rows are dropped.
Dataset five_class(std::uint64_t seed, std::size_t per_class = 100);

struct RandomSpec {
  std::size_t rows = 200;
  std::size_t vars = 4;
  std::size_t classes = 3;
  // Values are rounded to this many decimals, which produces ties.
  int decimals = 1;
};

// Gaussian class clouds with random centers and spreads, so classes overlap
// to a random degree. Ambiguous rows are dropped, so the row count can come
// out slightly below spec.rows.
Dataset random(std::uint64_t seed, const RandomSpec& spec);

// Draws a spec with rows in [lo_rows, hi_rows], vars in [1, max_vars],
// classes in [2, max_classes].
RandomSpec random_spec(std::uint64_t seed, std::size_t lo_rows, std::size_t hi_rows, std::size_t max_vars,
                       std::size_t max_classes);

// `groups` isotropic blobs in `dims` dimensions, centers `separation` apart
// along successive axes, unit spread.
Dataset blobs(std::uint64_t seed, std::size_t groups, std::size_t per_group, std::size_t dims, double separation);

}  // namespace vax::synthetic
