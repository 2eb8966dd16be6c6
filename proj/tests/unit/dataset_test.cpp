#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "vax/dataset.hpp"
#include "vax/error.hpp"
#include "vax/synthetic.hpp"

using namespace vax;

namespace {

IngestConfig label(const std::string& name) {
  IngestConfig c;
  c.label_column = name;
  return c;
}

}  // namespace

TEST(Ingest, DropsRowsWithMissingValues) {
  const auto got = ingest_csv_text("x,y,cls\n1,2,A\n3,,B\n5,6,B\n7,8,A\n", label("cls"));
  EXPECT_EQ(got.dataset.n_rows(), 3u);
  EXPECT_EQ(got.report.dropped_missing, 1u);
  EXPECT_EQ(got.report.rows_read, 4u);
  EXPECT_EQ(got.dataset.instance_ids()[1], "2");  // data-row ordinal survives
}

TEST(Ingest, MissingTokens) {
  const auto got = ingest_csv_text("x,cls\n1,A\nNA,B\n?,B\n2,B\n3,A\n", label("cls"));
  EXPECT_EQ(got.report.dropped_missing, 2u);
}

TEST(Ingest, AmbiguousPairRemoved) {
  const auto got = ingest_csv_text("x,y,cls\n1,1,A\n1,1,B\n2,2,A\n3,3,B\n", label("cls"));
  EXPECT_EQ(got.report.dropped_ambiguous, 2u);
  EXPECT_EQ(got.dataset.n_rows(), 2u);
}

TEST(Ingest, DuplicatesWithSameLabelKept) {
  const auto got = ingest_csv_text("x,cls\n1,A\n1,A\n2,B\n", label("cls"));
  EXPECT_EQ(got.report.dropped_ambiguous, 0u);
  EXPECT_EQ(got.dataset.n_rows(), 3u);
}

TEST(Ingest, AmbiguityIsErrorWhenNotDropping) {
  auto c = label("cls");
  c.drop_ambiguous = false;
  EXPECT_THROW(ingest_csv_text("x,cls\n1,A\n1,B\n2,A\n3,B\n", c), InputError);
}

TEST(Ingest, RangesRecomputedAfterRemoval) {
  const auto got = ingest_csv_text("x,cls\n100,A\n100,B\n2,A\n3,B\n", label("cls"));
  EXPECT_EQ(got.dataset.variable_ranges()[0].min, 2.0);
  EXPECT_EQ(got.dataset.variable_ranges()[0].max, 3.0);
}

TEST(Ingest, CategoricalEncodedBySortedValue) {
  const auto got = ingest_csv_text("answer,cls\nno,A\nyes,B\nmaybe,A\nno,A\n", label("cls"));
  const Dataset& d = got.dataset;
  ASSERT_TRUE(d.is_categorical(0));
  EXPECT_EQ(d.categories(0), (std::vector<std::string>{"maybe", "no", "yes"}));
  EXPECT_EQ(d.value(0, 0), 1.0);
  EXPECT_EQ(d.value(1, 0), 2.0);
  EXPECT_EQ(d.value(2, 0), 0.0);
}

TEST(Ingest, ClassOrderIsFirstAppearance) {
  const auto got = ingest_csv_text("x,cls\n1,zeta\n2,alpha\n3,zeta\n", label("cls"));
  EXPECT_EQ(got.dataset.classes(), (std::vector<std::string>{"zeta", "alpha"}));
}

TEST(Ingest, ExplicitClassOrder) {
  auto c = label("cls");
  c.class_order = {"alpha", "zeta"};
  const auto got = ingest_csv_text("x,cls\n1,zeta\n2,alpha\n", c);
  EXPECT_EQ(got.dataset.classes(), (std::vector<std::string>{"alpha", "zeta"}));
  EXPECT_EQ(got.dataset.label(0), 1);
}

TEST(Ingest, IdColumn) {
  auto c = label("cls");
  c.id_column = "name";
  const auto got = ingest_csv_text("name,x,cls\nfr,1,A\nde,2,B\n", c);
  EXPECT_EQ(got.dataset.n_vars(), 1u);
  EXPECT_EQ(got.dataset.row_of("de"), RowIndex{1});
  EXPECT_FALSE(got.dataset.row_of("it"));
}

TEST(Ingest, Errors) {
  EXPECT_THROW(ingest_csv_text("x,cls\n1,A\n2,B\n", label("nope")), InputError);
  EXPECT_THROW(ingest_csv_text("x,cls\n1,A\n2,A\n", label("cls")), InputError);
  EXPECT_THROW(ingest_csv_text("x,cls\n,A\n,B\n", label("cls")), InputError);
  EXPECT_THROW(ingest_csv_text("x,cls\n", label("cls")), InputError);
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv", label("cls")), InputError);
  auto c = label("cls");
  c.id_column = "id";
  EXPECT_THROW(ingest_csv_text("id,x,cls\na,1,A\na,2,B\n", c), InputError);
}

TEST(Ingest, FromFile) {
  const auto path = std::filesystem::temp_directory_path() / "vax_ingest_test.csv";
  std::ofstream(path) << "x,cls\n1,A\n2,B\n";
  EXPECT_EQ(ingest_csv(path, label("cls")).dataset.n_rows(), 2u);
  std::filesystem::remove(path);
}

TEST(Ingest, DiscretizedTargetExcludedFromVariables) {
  auto c = label("score");
  c.discretize_bins = 3;
  const auto got = ingest_csv_text("x,score\n1,0\n2,1\n3,2\n4,3\n", c);
  EXPECT_EQ(got.dataset.n_vars(), 1u);
  EXPECT_EQ(got.dataset.n_classes(), 3u);
  EXPECT_EQ(got.report.bin_edges.size(), 4u);
  EXPECT_EQ(got.dataset.classes().front().front(), '[');
}

TEST(Discretize, ReportedHappinessEdges) {
  // Extremes of the 2019 score table; edges reported as 4.49 and 6.13.
  const std::vector<double> scores = {2.853, 5.0, 7.769};
  const auto got = discretize_target(scores, 3);
  ASSERT_EQ(got.edges.size(), 4u);
  EXPECT_NEAR(got.edges[1], 4.49, 0.005);
  EXPECT_NEAR(got.edges[2], 6.13, 0.005);
}

TEST(Discretize, SymmetricBins) {
  const std::vector<double> v = {0, 1, 2};
  EXPECT_EQ(discretize_target(v, 3).labels, (std::vector<int>{0, 1, 2}));
}

TEST(Discretize, MatchesIndependentEdgeFormula) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 9);
  std::vector<double> v(1000);
  for (double& x : v) x = u(rng);
  const auto got = discretize_target(v, 4);
  const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    int expect = 3;
    for (int b = 0; b < 4; ++b)
      if (v[i] < lo + (b + 1) * (hi - lo) / 4) {
        expect = b;
        break;
      }
    EXPECT_EQ(got.labels[i], expect) << v[i];
  }
}

TEST(Discretize, Errors) {
  const std::vector<double> constant = {2, 2, 2};
  EXPECT_THROW(discretize_target(constant, 3), InputError);
  const std::vector<double> v = {1, 2};
  EXPECT_THROW(discretize_target(v, 1), InputError);
}

TEST(Partition, FiveClassClassE) {
  const Dataset d = synthetic::five_class(1);
  const auto p = partition(d, *d.class_index("E"));
  EXPECT_EQ(p.members.size(), 100u);
  EXPECT_EQ(p.complement.size(), 400u);
}

TEST(Partition, TwoClassComplementIsOtherClass) {
  const Dataset d = oracle::tiny_dataset(5, 20, 2, 2, 6);
  const auto p = partition(d, 0);
  for (RowIndex r : p.complement) EXPECT_EQ(d.label(r), 1);
}

TEST(Partition, MatchesLabelScan) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset d = oracle::tiny_dataset(seed, 40, 2, 4, 5);
    for (int c = 0; c < static_cast<int>(d.n_classes()); ++c) {
      const auto p = partition(d, c);
      std::vector<RowIndex> in, out;
      for (std::size_t r = 0; r < d.n_rows(); ++r) (d.label(r) == c ? in : out).push_back(static_cast<RowIndex>(r));
      EXPECT_EQ(p.members, in);
      EXPECT_EQ(p.complement, out);
      EXPECT_EQ(p.members.size() + p.complement.size(), d.n_rows());
    }
  }
  EXPECT_THROW(partition(oracle::tiny_dataset(1, 10, 1, 2, 4), 7), InputError);
}

TEST(Dataset, ConstructorRejectsAmbiguityAndBadShapes) {
  Dataset::Columns c;
  c.variable_names = {"x"};
  c.values = {{1, 1}};
  c.labels = {0, 1};
  c.classes = {"A", "B"};
  EXPECT_THROW(Dataset{c}, InputError);
  c.values = {{1, NAN}};
  EXPECT_THROW(Dataset{c}, InputError);
  c.values = {{1, 2}};
  c.classes = {"A", "B", "C"};
  EXPECT_THROW(Dataset{c}, InputError);  // empty class
  c.classes = {"A"};
  c.labels = {0, 0};
  EXPECT_THROW(Dataset{c}, InputError);
}

TEST(Dataset, CanonicalCsvRoundTrip) {
  const auto first = ingest_csv_text("id,answer,x,cls\nr1,yes,1.5,A\nr2,no,2.25,B\nr3,no,-3,A\nr4,\"a,b\",0.1,B\n", [] {
    IngestConfig c;
    c.label_column = "cls";
    c.id_column = "id";
    return c;
  }());
  const std::string text = to_canonical_csv(first.dataset);
  IngestConfig c;
  c.label_column = "cls";
  c.id_column = "id";
  const auto again = ingest_csv_text(text, c);
  EXPECT_TRUE(again.dataset == first.dataset);
  EXPECT_EQ(to_canonical_csv(again.dataset), text);
  EXPECT_EQ(fingerprint(again.dataset), fingerprint(first.dataset));
}

TEST(Dataset, SyntheticRoundTrip) {
  const Dataset d = synthetic::five_class(4);
  IngestConfig c;
  c.label_column = "class";
  c.id_column = "instance_id";
  EXPECT_TRUE(ingest_csv_text(to_canonical_csv(d), c).dataset == d);
}

TEST(Dataset, UnambiguousRowsLeaveNoConflicts) {
  std::mt19937_64 rng(2);
  std::vector<std::vector<double>> values(2, std::vector<double>(300));
  std::vector<int> labels(300);
  for (std::size_t r = 0; r < 300; ++r) {
    values[0][r] = static_cast<double>(rng() % 4);
    values[1][r] = static_cast<double>(rng() % 4);
    labels[r] = static_cast<int>(rng() % 3);
  }
  const auto keep = unambiguous_rows(values, labels);
  std::map<std::pair<double, double>, std::set<int>> seen;
  for (RowIndex r : keep) seen[{values[0][r], values[1][r]}].insert(labels[r]);
  for (const auto& [key, ls] : seen) EXPECT_EQ(ls.size(), 1u);
  // Every dropped row really was in conflict.
  std::map<std::pair<double, double>, std::set<int>> all;
  for (std::size_t r = 0; r < 300; ++r) all[{values[0][r], values[1][r]}].insert(labels[r]);
  std::set<RowIndex> kept(keep.begin(), keep.end());
  for (std::size_t r = 0; r < 300; ++r)
    if (!kept.count(static_cast<RowIndex>(r))) EXPECT_GT((all[{values[0][r], values[1][r]}].size()), 1u);
}
