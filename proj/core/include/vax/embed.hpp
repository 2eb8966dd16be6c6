#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/jep.hpp"

namespace vax {

using Matrix = Eigen::MatrixXd;

// The dataset next to its pattern-centroid extension. Each row's extension
// is the mean of the rows supported by the same JEP; rows no JEP supports
// form singleton groups and extend with their own values.
struct ExtendedDataset {
  Matrix base;       // N x M
  Matrix extension;  // N x M
  std::vector<long> pattern_of_row;  // index into the JEP list, -1 when unsupported
  std::vector<std::size_t> groups;   // dense group label per row
  std::size_t group_count = 0;
};

// Throws ConsistencyError when two patterns claim the same row.
ExtendedDataset extend(const Dataset& dataset, const JepSet& jeps);

// [(1 - lambda) X | lambda X~] on raw values. Throws InputError unless
// lambda lies in [0, 1].
Matrix weight_unnormalized(const ExtendedDataset& extended, double lambda);

// [(1 - lambda) Z(X) | lambda Z(X~)] where Z z-scores each original
// variable (population std) and the extension column of that variable uses
// the same mean and std. Constant variables map to 0.
Matrix weight(const ExtendedDataset& extended, double lambda);

// Column-wise z-score with population std; constant columns become 0.
Matrix zscore(const Matrix& data);

// N x N Euclidean distance matrix between rows.
Matrix pairwise_distances(const Matrix& points);

// Upper triangle (i < j) in row-major order.
std::vector<double> condensed(const Matrix& distances);

// Classical (Torgerson) scaling of the rows of `data` into `dims`
// dimensions: top eigenpairs of the double-centered Gram matrix. Each axis
// is oriented so its first clearly nonzero coordinate is positive. Throws
// InputError when N < 3; all-identical rows give zeros and a warning.
Matrix mds(const Matrix& data, Eigen::Index dims = 2);

// Same from a symmetric distance matrix.
Matrix mds_from_distances(const Matrix& distances, Eigen::Index dims = 2);

// sqrt(sum (d_high - d_low)^2 / sum d_high^2) over matched pairs, clamped to
// 1 (with a warning) for expanding embeddings. Throws InputError on
// mismatched lengths or all-zero high distances.
double kruskal_stress(std::span<const double> high, std::span<const double> low);

// kruskal_stress after rescaling `low` by the least-squares factor
// sum(high * low) / sum(low^2); invariant to the overall map scale.
double scaled_kruskal_stress(std::span<const double> high, std::span<const double> low);

// Mean silhouette over all rows given a distance matrix; rows alone in their
// group contribute 0. Throws InputError with fewer than 2 groups.
double silhouette(const Matrix& distances, std::span<const std::size_t> groups);

// 1 - (sc + 1) / 2 of the Euclidean silhouette of the rows of `points`.
double silhouette_inverted(const Matrix& points, std::span<const std::size_t> groups);

}  // namespace vax
