#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vax/embed.hpp"
#include "vax/error.hpp"
#include "vax/synthetic.hpp"

using namespace vax;

namespace {

Matrix to_matrix(const Dataset& d) {
  Matrix m(d.n_rows(), d.n_vars());
  for (std::size_t r = 0; r < d.n_rows(); ++r)
    for (std::size_t v = 0; v < d.n_vars(); ++v) m(r, v) = d.value(r, v);
  return m;
}

std::vector<std::size_t> labels_of(const Dataset& d) {
  std::vector<std::size_t> g;
  for (int l : d.labels()) g.push_back(static_cast<std::size_t>(l));
  return g;
}

Matrix random_points(std::uint64_t seed, Eigen::Index n, Eigen::Index dims) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> u(0, 1);
  Matrix m(n, dims);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Matrix random_rotation(std::uint64_t seed, Eigen::Index dims) {
  Eigen::HouseholderQR<Matrix> qr(random_points(seed, dims, dims));
  return qr.householderQ();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// 4 rows on one variable: a pattern over rows 0-1, one over row 2, row 3 unsupported.
struct Small {
  Dataset dataset;
  JepSet jeps;
};

Small small() {
  Dataset::Columns c;
  c.variable_names = {"v"};
  c.values = {{0, 2, 10, 14}};
  c.labels = {0, 0, 1, 1};
  c.classes = {"A", "B"};
  Small s{Dataset(std::move(c)), {}};
  Pattern a, b;
  a.rows = {0, 1};
  b.rows = {2};
  b.class_id = 1;
  s.jeps.patterns = {a, b};
  s.jeps.n_rows = 4;
  return s;
}

}  // namespace

TEST(Extend, CentroidsAndGroups) {
  const Small s = small();
  const ExtendedDataset e = extend(s.dataset, s.jeps);
  EXPECT_EQ(e.base, (Matrix(4, 1) << 0, 2, 10, 14).finished());
  EXPECT_EQ(e.extension, (Matrix(4, 1) << 1, 1, 10, 14).finished());
  EXPECT_EQ(e.pattern_of_row, (std::vector<long>{0, 0, 1, -1}));
  EXPECT_EQ(e.groups, (std::vector<std::size_t>{0, 0, 1, 2}));
  EXPECT_EQ(e.group_count, 3u);
}

TEST(Extend, CentroidIsPatternMean) {
  const Dataset d = synthetic::five_class(1);
  const JepSet jeps = select_and_aggregate(mine(d, 16, 1), d).jeps;
  const ExtendedDataset e = extend(d, jeps);
  for (const auto& p : jeps.patterns) {
    const auto mean = oracle::column_mean(d, p.rows);
    for (RowIndex r : p.rows)
      for (std::size_t v = 0; v < d.n_vars(); ++v) EXPECT_NEAR(e.extension(r, v), mean[v], 1e-12);
  }
}

TEST(Extend, OverlapRejected) {
  Small s = small();
  s.jeps.patterns[1].rows = {1, 2};
  EXPECT_THROW(extend(s.dataset, s.jeps), ConsistencyError);
}

TEST(Weight, HandComputed) {
  const ExtendedDataset e = extend(small().dataset, small().jeps);
  const double mean = 6.5;
  const double sd = std::sqrt((6.5 * 6.5 + 4.5 * 4.5 + 3.5 * 3.5 + 7.5 * 7.5) / 4.0);
  const Matrix w = weight(e, 0.25);
  ASSERT_EQ(w.rows(), 4);
  ASSERT_EQ(w.cols(), 2);
  const double base[] = {0, 2, 10, 14}, ext[] = {1, 1, 10, 14};
  for (int r = 0; r < 4; ++r) {
    EXPECT_NEAR(w(r, 0), 0.75 * (base[r] - mean) / sd, 1e-12);
    EXPECT_NEAR(w(r, 1), 0.25 * (ext[r] - mean) / sd, 1e-12);
  }
  const Matrix u = weight_unnormalized(e, 0.5);
  EXPECT_EQ(u.col(0), 0.5 * e.base.col(0));
  EXPECT_EQ(u.col(1), 0.5 * e.extension.col(0));
}

TEST(Weight, Endpoints) {
  const Dataset d = synthetic::five_class(2);
  const JepSet jeps = select_and_aggregate(mine(d, 32, 2), d).jeps;
  const ExtendedDataset e = extend(d, jeps);
  const Matrix w0 = weight(e, 0.0);
  const Matrix z = zscore(e.base);
  EXPECT_LE((pairwise_distances(w0) - pairwise_distances(z)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(w0.rightCols(d.n_vars()).cwiseAbs().maxCoeff(), 0.0);

  const Matrix w1u = weight_unnormalized(e, 1.0);
  const Matrix w1 = weight(e, 1.0);
  const Matrix du = pairwise_distances(w1u), dn = pairwise_distances(w1);
  for (std::size_t i = 0; i < d.n_rows(); ++i)
    for (std::size_t j = 0; j < d.n_rows(); ++j)
      if (e.groups[i] == e.groups[j]) {
        EXPECT_EQ(du(i, j), 0.0);
        EXPECT_EQ(dn(i, j), 0.0);
      }
}

TEST(Weight, OutOfRange) {
  const ExtendedDataset e = extend(small().dataset, small().jeps);
  EXPECT_THROW(weight(e, -0.1), InputError);
  EXPECT_THROW(weight(e, 1.1), InputError);
  EXPECT_THROW(weight_unnormalized(e, 2.0), InputError);
}

TEST(Zscore, ConstantColumnIsZero) {
  Matrix m(3, 2);
  m << 1, 5, 2, 5, 3, 5;
  const Matrix z = zscore(m);
  EXPECT_EQ(z.col(1).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(z.col(0).squaredNorm() / 3.0, 1.0, 1e-12);
}

TEST(Distances, MatchLoops) {
  const Matrix p = random_points(3, 12, 4);
  EXPECT_LE(max_abs_diff(condensed(pairwise_distances(p)), oracle::distances(p)), 1e-12);
}

TEST(Mds, PlanarConfigurationRecovered) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Matrix flat = Matrix::Zero(40, 5);
    flat.leftCols(2) = random_points(seed, 40, 2) * 10.0;
    const Matrix embedded = (flat * random_rotation(seed + 100, 5)).rowwise() + random_points(seed, 1, 5).row(0);
    const Matrix y = mds(embedded);
    const auto high = oracle::distances(embedded), low = oracle::distances(y);
    EXPECT_LE(max_abs_diff(high, low), 1e-6);
    EXPECT_LT(kruskal_stress(high, low), 1e-6);
  }
}

TEST(Mds, SquareInFiveDimensions) {
  Matrix p = Matrix::Zero(4, 5);
  p(1, 0) = 1;
  p(2, 0) = 1;
  p(2, 1) = 1;
  p(3, 1) = 1;
  const Matrix y = mds(p * random_rotation(9, 5));
  const auto low = oracle::distances(y);
  const std::vector<double> want = {1, std::sqrt(2.0), 1, 1, std::sqrt(2.0), 1};
  EXPECT_LE(max_abs_diff(low, want), 1e-9);
}

TEST(Mds, MatchesPowerIterationOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Matrix p = random_points(seed, 30, 6);
    p.col(0) *= 4.0;  // well separated leading eigenvalues
    p.col(1) *= 2.0;
    const Matrix y = mds(p);
    const Matrix ref = oracle::power_mds(p, 2);
    for (int k = 0; k < 2; ++k) {
      const double sign = y.col(k).dot(ref.col(k)) < 0 ? -1.0 : 1.0;
      EXPECT_LE((y.col(k) - sign * ref.col(k)).cwiseAbs().maxCoeff(), 1e-6) << "seed " << seed << " axis " << k;
    }
  }
}

TEST(Mds, RotationInvariant) {
  const Matrix p = random_points(4, 25, 5);
  const Matrix a = mds(p), b = mds(p * random_rotation(5, 5));
  EXPECT_LE(max_abs_diff(oracle::distances(a), oracle::distances(b)), 1e-8);
}

TEST(Mds, BothRoutesAgreeWithDistanceRoute) {
  for (auto [n, dims] : {std::pair<Eigen::Index, Eigen::Index>{50, 3}, {6, 10}}) {
    const Matrix p = random_points(static_cast<std::uint64_t>(n), n, dims);
    const Matrix a = mds(p), b = mds_from_distances(pairwise_distances(p));
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-8) << n << "x" << dims;
  }
}

TEST(Mds, Orientation) {
  const Matrix y = mds(random_points(6, 20, 3));
  for (int k = 0; k < 2; ++k) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      if (std::abs(y(i, k)) > 1e-9) {
        EXPECT_GT(y(i, k), 0.0);
        break;
      }
    }
  }
}

TEST(Mds, DegenerateInputs) {
  EXPECT_THROW(mds(random_points(1, 2, 3)), InputError);
  const Matrix same = Matrix::Ones(5, 3);
  EXPECT_EQ(mds(same).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Kruskal, Values) {
  const std::vector<double> h = {1, 2, 3};
  EXPECT_EQ(kruskal_stress(h, h), 0.0);
  EXPECT_DOUBLE_EQ(kruskal_stress(std::vector<double>{1, 2}, std::vector<double>{1, 1}), std::sqrt(1.0 / 5.0));
  EXPECT_EQ(kruskal_stress(std::vector<double>{1, 1}, std::vector<double>{10, 10}), 1.0);
  EXPECT_THROW(kruskal_stress(h, std::vector<double>{1, 2}), InputError);
  EXPECT_THROW(kruskal_stress(std::vector<double>{0, 0}, std::vector<double>{1, 1}), InputError);
}

TEST(Kruskal, ScaledIgnoresMapScale) {
  const std::vector<double> h = {1, 2, 3, 4}, l = {2, 4, 6, 8};
  EXPECT_NEAR(scaled_kruskal_stress(h, l), 0.0, 1e-15);
  const std::vector<double> noisy = {1.1, 1.9, 3.2, 3.7};
  std::vector<double> big(noisy);
  for (auto& x : big) x *= 7.0;
  EXPECT_NEAR(scaled_kruskal_stress(h, noisy), scaled_kruskal_stress(h, big), 1e-12);
  EXPECT_NEAR(oracle::stress(h, l), kruskal_stress(h, l), 0.0);
}

TEST(Silhouette, SeparatedBlobs) {
  const Dataset d = synthetic::blobs(1, 2, 50, 2, 50.0);
  EXPECT_LT(silhouette_inverted(to_matrix(d), labels_of(d)), 0.1);
}

TEST(Silhouette, AllSingletons) {
  const Matrix p = random_points(2, 10, 2);
  std::vector<std::size_t> g(10);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = i;
  EXPECT_EQ(silhouette(pairwise_distances(p), g), 0.0);
  EXPECT_EQ(silhouette_inverted(p, g), 0.5);
}

TEST(Silhouette, MatchesOracle) {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix p = random_points(seed, 30, 3);
    std::uniform_int_distribution<std::size_t> pick(0, 4);
    std::vector<std::size_t> g(30);
    for (auto& x : g) x = pick(rng);
    g[0] = 0;
    g[1] = 1;
    EXPECT_NEAR(silhouette(pairwise_distances(p), g), oracle::silhouette(p, g), 1e-12);
  }
}

TEST(Silhouette, DecreasesWithSeparation) {
  double prev = 1.0;
  for (double sep : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    const Dataset d = synthetic::blobs(3, 3, 40, 2, sep);
    const double sc = silhouette_inverted(to_matrix(d), labels_of(d));
    EXPECT_LT(sc, prev) << sep;
    prev = sc;
  }
}

TEST(Silhouette, OneGroupRejected) {
  const Matrix p = random_points(2, 5, 2);
  EXPECT_THROW(silhouette(pairwise_distances(p), std::vector<std::size_t>(5, 0)), InputError);
}
