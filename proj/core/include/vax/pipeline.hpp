#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vax/artifacts.hpp"
#include "vax/dataset.hpp"
#include "vax/explain.hpp"
#include "vax/jep.hpp"
#include "vax/sweep.hpp"

namespace vax {

struct RunConfig {
  std::filesystem::path input;
  IngestConfig ingest;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trees;  // unset: grow along tree_schedule
  std::vector<std::size_t> tree_schedule = default_tree_schedule();
  std::optional<double> lambda;  // unset: recommended grid value
  std::vector<double> lambda_grid = default_lambda_grid();
  StressReference stress_reference = StressReference::kWeighted;
  bool embed = true;
  std::optional<std::size_t> histogram_bins;
  RowOrder order = RowOrder::kSupport;
  std::filesystem::path output;  // empty: compute only
  bool dump_raw = false;          // also write raw_patterns.jsonl
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct RunResult {
  Dataset dataset;
  IngestReport report;
  std::vector<TreeSweepPoint> tree_curve;
  std::vector<RawPattern> raw;
  Selection selection;
  ExplanationModel model;
  std::optional<LambdaSweep> sweep;
  std::optional<EmbeddingResult> map;
  RunManifest manifest;
  std::vector<StageTiming> timings;
};

// Names of the files a run writes, in writing order.
std::vector<std::string> artifact_files(bool embedded);

// ingest -> mine (fixed k or tree sweep) -> select/aggregate -> matrix ->
// lambda sweep and map -> artifacts. A failing stage rethrows with the stage
// name prefixed and keeps the error category. Artifacts are staged in a
// temporary directory and moved into `config.output` only once every stage
// has succeeded. timings.json is kept apart from the bit-stable artifacts.
RunResult run(const RunConfig& config);

// Same stages on an in-memory dataset; nothing is written.
RunResult run_on(Dataset dataset, IngestReport report, const RunConfig& config);

// One JSON object per line: id, class, selectors, support count.
std::string raw_patterns_jsonl(std::span<const RawPattern> raw, const Dataset& dataset);

// Writes the artifacts of `result` into `directory`.
void write_artifacts(const RunResult& result, const std::filesystem::path& directory);

struct InstanceExplanation {
  // Per requested id: index into the JEP set, unset when no pattern supports it.
  std::vector<std::optional<std::size_t>> pattern_of;
  std::vector<std::string> unsupported;
  // Distinct supporting patterns, in set order.
  std::vector<std::size_t> patterns;
};

// Throws InputError on an unknown id.
InstanceExplanation explain_instances(const JepSet& jeps, const Dataset& dataset,
                                      const std::vector<std::string>& instance_ids);
InstanceExplanation explain_instances(const ArtifactSet& artifacts, const std::vector<std::string>& instance_ids);

}  // namespace vax
