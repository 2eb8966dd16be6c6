#include "vax/embed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "vax/error.hpp"

namespace vax {
namespace {

void warn(const std::string& message) { std::clog << "vax: warning: " << message << '\n'; }

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1], got " + std::to_string(lambda));
}

struct ColumnStats {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd stddev;
};

ColumnStats column_stats(const Matrix& data) {
  ColumnStats s;
  s.mean = data.colwise().mean();
  s.stddev = ((data.rowwise() - s.mean).array().square().colwise().sum() / static_cast<double>(data.rows())).sqrt();
  return s;
}

Matrix standardize(const Matrix& data, const ColumnStats& s) {
  Matrix out(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (s.stddev(j) > 0.0) {
      out.col(j) = (data.col(j).array() - s.mean(j)) / s.stddev(j);
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

// First clearly nonzero entry of every column made positive.
void orient(Matrix& coords) {
  const double scale = coords.cwiseAbs().maxCoeff();
  const double eps = std::max(scale, 1.0) * 1e-10;
  for (Eigen::Index j = 0; j < coords.cols(); ++j) {
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
      if (std::abs(coords(i, j)) > eps) {
        if (coords(i, j) < 0) coords.col(j) *= -1.0;
        break;
      }
    }
  }
}

// Coordinates from a symmetric PSD Gram matrix.
Matrix from_gram(const Matrix& gram, Eigen::Index dims) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  if (solver.info() != Eigen::Success) throw ConsistencyError("mds: eigendecomposition failed");
  const Eigen::Index n = gram.rows();
  Matrix coords = Matrix::Zero(n, dims);
  for (Eigen::Index k = 0; k < dims && k < n; ++k) {
    const Eigen::Index idx = n - 1 - k;  // eigenvalues ascending
    const double value = solver.eigenvalues()(idx);
    if (value > 0.0) coords.col(k) = solver.eigenvectors().col(idx) * std::sqrt(value);
  }
  return coords;
}

}  // namespace

ExtendedDataset extend(const Dataset& dataset, const JepSet& jeps) {
  const std::size_t n = dataset.n_rows(), m = dataset.n_vars();
  ExtendedDataset out;
  out.base.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t v = 0; v < m; ++v)
    for (std::size_t i = 0; i < n; ++i) out.base(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(v)) = dataset.value(i, v);
  out.extension = out.base;
  out.pattern_of_row.assign(n, -1);
  out.groups.assign(n, 0);

  for (std::size_t k = 0; k < jeps.patterns.size(); ++k) {
    const auto& rows = jeps.patterns[k].rows;
    if (rows.empty()) continue;
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(m));
    for (RowIndex r : rows) {
      if (r >= n) throw ConsistencyError("extend: pattern row out of range");
      if (out.pattern_of_row[r] != -1) throw ConsistencyError("extend: JEP row sets overlap");
      out.pattern_of_row[r] = static_cast<long>(k);
      centroid += out.base.row(r);
    }
    centroid /= static_cast<double>(rows.size());
    for (RowIndex r : rows) {
      out.extension.row(r) = centroid;
      out.groups[r] = out.group_count;
    }
    ++out.group_count;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (out.pattern_of_row[i] == -1) out.groups[i] = out.group_count++;
  return out;
}

Matrix weight_unnormalized(const ExtendedDataset& e, double lambda) {
  check_lambda(lambda);
  Matrix out(e.base.rows(), e.base.cols() * 2);
  out << (1.0 - lambda) * e.base, lambda * e.extension;
  return out;
}

Matrix weight(const ExtendedDataset& e, double lambda) {
  check_lambda(lambda);
  const ColumnStats stats = column_stats(e.base);
  Matrix out(e.base.rows(), e.base.cols() * 2);
  out << (1.0 - lambda) * standardize(e.base, stats), lambda * standardize(e.extension, stats);
  return out;
}

Matrix zscore(const Matrix& data) { return standardize(data, column_stats(data)); }

Matrix pairwise_distances(const Matrix& points) {
  const Eigen::Index n = points.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
  }
  return d;
}

std::vector<double> condensed(const Matrix& distances) {
  const Eigen::Index n = distances.rows();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(distances(i, j));
  return out;
}

Matrix mds(const Matrix& data, Eigen::Index dims) {
  const Eigen::Index n = data.rows();
  if (n < 3) throw InputError("mds: need at least 3 rows");
  const Matrix centered = data.rowwise() - data.colwise().mean();
  if (centered.cwiseAbs().maxCoeff() == 0.0) {
    warn("mds: all rows are identical, returning a degenerate layout");
    return Matrix::Zero(n, dims);
  }
  Matrix coords;
  if (centered.cols() < n) {
    // The Gram matrix Xc Xc^T shares its nonzero spectrum with Xc^T Xc;
    // projecting onto the small problem's eigenvectors gives U * sqrt(L).
    Eigen::SelfAdjointEigenSolver<Matrix> solver(centered.transpose() * centered);
    if (solver.info() != Eigen::Success) throw ConsistencyError("mds: eigendecomposition failed");
    const Eigen::Index d = centered.cols();
    coords = Matrix::Zero(n, dims);
    for (Eigen::Index k = 0; k < dims && k < d; ++k) {
      const Eigen::Index idx = d - 1 - k;
      if (solver.eigenvalues()(idx) > 0.0) coords.col(k) = centered * solver.eigenvectors().col(idx);
    }
  } else {
    coords = from_gram(centered * centered.transpose(), dims);
  }
  orient(coords);
  return coords;
}

Matrix mds_from_distances(const Matrix& distances, Eigen::Index dims) {
  const Eigen::Index n = distances.rows();
  if (n < 3) throw InputError("mds: need at least 3 rows");
  if (distances.cols() != n) throw InputError("mds: distance matrix must be square");
  if (distances.cwiseAbs().maxCoeff() == 0.0) {
    warn("mds: all distances are zero, returning a degenerate layout");
    return Matrix::Zero(n, dims);
  }
  const Matrix sq = distances.array().square().matrix();
  const Matrix centering = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  Matrix gram = -0.5 * centering * sq * centering;
  gram = 0.5 * (gram + gram.transpose());
  Matrix coords = from_gram(gram, dims);
  orient(coords);
  return coords;
}

double kruskal_stress(std::span<const double> high, std::span<const double> low) {
  if (high.size() != low.size()) throw InputError("stress: distance lists differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < high.size(); ++i) {
    num += (high[i] - low[i]) * (high[i] - low[i]);
    den += high[i] * high[i];
  }
  if (den == 0.0) throw InputError("stress: all high-dimensional distances are zero");
  const double stress = std::sqrt(num / den);
  if (stress > 1.0) {
    warn("stress: embedding expands distances, reporting 1");
    return 1.0;
  }
  return stress;
}

double scaled_kruskal_stress(std::span<const double> high, std::span<const double> low) {
  if (high.size() != low.size()) throw InputError("stress: distance lists differ in length");
  double cross = 0.0, self = 0.0;
  for (std::size_t i = 0; i < high.size(); ++i) {
    cross += high[i] * low[i];
    self += low[i] * low[i];
  }
  if (self == 0.0) return kruskal_stress(high, low);
  const double factor = cross / self;
  std::vector<double> scaled(low.begin(), low.end());
  for (double& d : scaled) d *= factor;
  return kruskal_stress(high, scaled);
}

double silhouette(const Matrix& distances, std::span<const std::size_t> groups) {
  const std::size_t n = groups.size();
  if (static_cast<std::size_t>(distances.rows()) != n) throw InputError("silhouette: size mismatch");
  std::size_t group_count = 0;
  for (std::size_t g : groups) group_count = std::max(group_count, g + 1);
  std::vector<std::size_t> sizes(group_count, 0);
  for (std::size_t g : groups) ++sizes[g];
  if (std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }) < 2)
    throw InputError("silhouette: need at least 2 groups");

  std::vector<double> sums(group_count);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[groups[i]] < 2) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      sums[groups[j]] += distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const double a = sums[groups[i]] / static_cast<double>(sizes[groups[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < group_count; ++g)
      if (g != groups[i] && sizes[g] > 0) b = std::min(b, sums[g] / static_cast<double>(sizes[g]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double silhouette_inverted(const Matrix& points, std::span<const std::size_t> groups) {
  const double sc = silhouette(pairwise_distances(points), groups);
  return 1.0 - (sc + 1.0) / 2.0;
}

}  // namespace vax
