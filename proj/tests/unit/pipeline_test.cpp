#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "tempdir.hpp"
#include "vax/error.hpp"
#include "vax/pipeline.hpp"
#include "vax/service.hpp"
#include "vax/synthetic.hpp"

using namespace vax;
using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;
namespace fs = std::filesystem;

namespace {

RunConfig config_for(const fs::path& input, const fs::path& out) {
  RunConfig c;
  c.input = input;
  c.ingest.label_column = "class";
  c.ingest.id_column = "instance_id";
  c.seed = 3;
  c.trees = 32;
  c.lambda_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  c.output = out;
  return c;
}

fs::path write_five_class(const TempDir& dir, std::uint64_t seed = 1, std::size_t per_class = 40) {
  const fs::path p = dir / "input.csv";
  write_file(p, to_canonical_csv(synthetic::five_class(seed, per_class)));
  return p;
}

void expect_valid(const std::string& schema, const fs::path& file) {
  const auto problems = oracle::validate(api_schemas().at(schema), Json::parse(read_file(file)));
  EXPECT_TRUE(problems.empty()) << file << ": " << (problems.empty() ? "" : problems.front());
}

}  // namespace

TEST(Pipeline, WritesValidArtifacts) {
  TempDir dir;
  const RunResult r = run(config_for(write_five_class(dir), dir / "out"));
  for (const auto& name : artifact_files(true)) EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
  EXPECT_TRUE(fs::exists(dir / "out" / "timings.json"));
  EXPECT_FALSE(fs::exists(dir / "out" / "raw_patterns.jsonl"));
  expect_valid("patterns.json", dir / "out" / "patterns.json");
  expect_valid("matrix.json", dir / "out" / "matrix.json");
  expect_valid("map.json", dir / "out" / "map.json");
  expect_valid("manifest.json", dir / "out" / "manifest.json");
  for (const auto& entry : fs::directory_iterator(dir / "out"))
    EXPECT_NE(entry.path().filename().string().rfind(".vax-staging", 0), 0u);

  const Json manifest = Json::parse(read_file(dir / "out" / "manifest.json"));
  EXPECT_EQ(manifest["selected"].get<std::size_t>() + manifest["aggregated"].get<std::size_t>() +
                manifest["discarded"].get<std::size_t>(),
            manifest["raw_patterns"].get<std::size_t>());
  EXPECT_EQ(manifest["trees"], 32);
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(r.manifest.selected, r.selection.jeps.patterns.size());
  EXPECT_EQ(Json::parse(read_file(dir / "out" / "patterns.json")).size(), r.selection.jeps.patterns.size());
}

TEST(Pipeline, ByteIdenticalReruns) {
  TempDir dir;
  const fs::path input = write_five_class(dir);
  RunConfig a = config_for(input, dir / "a"), b = config_for(input, dir / "b");
  a.trees.reset();
  b.trees.reset();
  a.dump_raw = b.dump_raw = true;
  run(a);
  run(b);
  for (auto name : artifact_files(true)) EXPECT_EQ(read_file(dir / "a" / name), read_file(dir / "b" / name)) << name;
  EXPECT_EQ(read_file(dir / "a" / "raw_patterns.jsonl"), read_file(dir / "b" / "raw_patterns.jsonl"));
}

TEST(Pipeline, NoEmbedKeepsPatternsAndMatrix) {
  TempDir dir;
  const fs::path input = write_five_class(dir);
  run(config_for(input, dir / "out"));
  const std::string patterns = read_file(dir / "out" / "patterns.json");
  const std::string matrix = read_file(dir / "out" / "matrix.json");
  RunConfig c = config_for(input, dir / "out");
  c.embed = false;
  const RunResult r = run(c);
  EXPECT_FALSE(r.map.has_value());
  EXPECT_EQ(read_file(dir / "out" / "patterns.json"), patterns);
  EXPECT_EQ(read_file(dir / "out" / "matrix.json"), matrix);
  EXPECT_FALSE(fs::exists(dir / "out" / "map.json"));
  EXPECT_FALSE(fs::exists(dir / "out" / "maps.json"));
  EXPECT_TRUE(Json::parse(read_file(dir / "out" / "manifest.json"))["lambda"].is_null());
}

TEST(Pipeline, LoadRoundTrip) {
  TempDir dir;
  const RunResult r = run(config_for(write_five_class(dir, 2), dir / "out"));
  const ArtifactSet a = load_artifacts(dir / "out");
  EXPECT_EQ(a.manifest, r.manifest);
  EXPECT_TRUE(a.dataset == r.dataset);
  ASSERT_EQ(a.jeps.patterns.size(), r.selection.jeps.patterns.size());
  for (std::size_t i = 0; i < a.jeps.patterns.size(); ++i) {
    const auto &x = a.jeps.patterns[i], &y = r.selection.jeps.patterns[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.rows, y.rows);
    EXPECT_EQ(x.selectors, y.selectors);
    EXPECT_EQ(x.aggregated_from, y.aggregated_from);
    EXPECT_EQ(x.support, y.support);
    EXPECT_EQ(x.fet_p, y.fet_p);
  }
  EXPECT_EQ(a.jeps.cumulative_coverage, r.selection.jeps.cumulative_coverage);
  ASSERT_TRUE(a.map.has_value());
  ASSERT_TRUE(a.maps.has_value());
  EXPECT_EQ((*a.maps)["maps"].size(), 5u);
}

TEST(Pipeline, TamperedDatasetRejected) {
  TempDir dir;
  run(config_for(write_five_class(dir), dir / "out"));
  std::string csv = read_file(dir / "out" / "dataset.csv");
  const auto pos = csv.find(',', csv.find('\n'));
  csv.insert(pos + 1, "1");  // change the first value of the first data row
  write_file(dir / "out" / "dataset.csv", csv);
  EXPECT_THROW(load_artifacts(dir / "out"), ConsistencyError);
}

TEST(Pipeline, SixRowHandCase) {
  TempDir dir;
  write_file(dir / "six.csv", "id,x,y\nr1,1,A\nr2,2,A\nr3,3,A\nr4,4,B\nr5,5,B\nr6,6,B\n");
  for (std::size_t k : {1u, 3u, 8u}) {
    RunConfig c;
    c.input = dir / "six.csv";
    c.ingest.label_column = "y";
    c.ingest.id_column = "id";
    c.trees = k;
    c.lambda_grid = {0.0, 1.0};
    const RunResult r = run(c);
    const JepSet& j = r.selection.jeps;
    ASSERT_EQ(j.patterns.size(), 2u);
    EXPECT_EQ(j.patterns[0].selectors, (Selectors{{0, {1, 3.5}}}));
    EXPECT_EQ(j.patterns[1].selectors, (Selectors{{0, {4, 6}}}));
    EXPECT_EQ(r.manifest.raw_patterns, 2 * k);
    EXPECT_EQ(r.manifest.aggregated, 2 * k - 2);
    EXPECT_EQ(r.manifest.discarded, 0u);
    for (const auto& p : j.patterns) {
      EXPECT_DOUBLE_EQ(p.fet_p, 0.05);
      EXPECT_EQ(p.support, 1.0);
    }
    const Json rows = matrix_json(r.model, r.dataset)["rows"];
    for (const auto& row : rows) EXPECT_FALSE(row["fet_significant"].get<bool>());
  }
}

TEST(Pipeline, FailingStageWritesNothing) {
  TempDir dir;
  RunConfig c = config_for(write_five_class(dir), dir / "out");
  c.lambda_grid = {0.5, 2.0};
  try {
    run(c);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("lambda-sweep: ", 0), 0u) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir / "out"));

  RunConfig missing = config_for(dir / "nope.csv", dir / "out2");
  EXPECT_THROW(run(missing), InputError);
  EXPECT_FALSE(fs::exists(dir / "out2"));

  RunConfig label = config_for(write_five_class(dir), dir / "out3");
  label.ingest.label_column = "nope";
  try {
    run(label);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("ingest: ", 0), 0u) << e.what();
  }
}

TEST(Pipeline, FixedLambdaOffGrid) {
  TempDir dir;
  RunConfig c = config_for(write_five_class(dir), {});
  c.lambda = 0.6;
  const RunResult r = run(c);
  ASSERT_TRUE(r.map.has_value());
  EXPECT_EQ(r.map->lambda, 0.6);
  EXPECT_FALSE(r.manifest.lambda_auto);
  EXPECT_EQ(r.manifest.lambda, 0.6);
}

TEST(Pipeline, ExplainInstances) {
  const Dataset d = synthetic::five_class(1, 30);
  RunConfig c;
  c.trees = 64;
  c.embed = false;
  const RunResult r = run_on(d, {}, c);
  const auto& ids = r.dataset.instance_ids();
  const InstanceExplanation e = explain_instances(r.selection.jeps, r.dataset, {ids[0], ids[1], ids[0]});
  ASSERT_EQ(e.pattern_of.size(), 3u);
  EXPECT_EQ(e.pattern_of[0], e.pattern_of[2]);
  for (std::size_t i = 0; i < 2; ++i) {
    if (!e.pattern_of[i]) continue;
    const auto& rows = r.selection.jeps.patterns[*e.pattern_of[i]].rows;
    EXPECT_TRUE(std::binary_search(rows.begin(), rows.end(), static_cast<RowIndex>(i)));
  }
  EXPECT_THROW(explain_instances(r.selection.jeps, r.dataset, {"missing"}), InputError);
}

TEST(Pipeline, RawPatternsJsonl) {
  const Dataset d = synthetic::five_class(1, 10);
  const auto raw = mine(d, 2, 1);
  const std::string text = raw_patterns_jsonl(raw, d);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  EXPECT_EQ(lines, raw.size());
  const Json first = Json::parse(text.substr(0, text.find('\n')));
  EXPECT_EQ(first["id"], 0);
}
