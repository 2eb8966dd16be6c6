#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vax/dataset.hpp"
#include "vax/embed.hpp"
#include "vax/explain.hpp"
#include "vax/jep.hpp"
#include "vax/sweep.hpp"

namespace vax {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct RunManifest {
  std::string label_column;
  std::string id_column = "instance_id";
  std::uint64_t seed = 0;
  std::size_t trees = 0;
  bool trees_auto = false;
  bool full_coverage = false;
  std::optional<double> lambda;  // unset when the embed stage was skipped
  bool lambda_auto = false;
  std::string stress_reference = "weighted";
  std::optional<std::size_t> histogram_bins;
  std::optional<int> discretize_bins;
  std::vector<double> bin_edges;
  std::size_t rows_read = 0;
  std::size_t dropped_missing = 0;
  std::size_t dropped_ambiguous = 0;
  std::size_t n_rows = 0;
  std::size_t n_vars = 0;
  std::vector<std::string> classes;
  std::size_t raw_patterns = 0;
  std::size_t selected = 0;
  std::size_t aggregated = 0;
  std::size_t discarded = 0;
  double coverage = 0.0;
  std::string fingerprint;  // 16 hex digits

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

// Pattern index per row, -1 when no pattern supports it.
std::vector<long> pattern_of_rows(const JepSet& jeps);

Json patterns_json(const JepSet& jeps, const Dataset& dataset);
// Matrix rows for `order` (indices into model.jeps) with cumulative coverage
// recomputed along it.
Json matrix_rows_json(const ExplanationModel& model, const Dataset& dataset, std::span<const std::size_t> order);
Json matrix_json(const ExplanationModel& model, const Dataset& dataset);
Json map_json(const EmbeddingResult& map, const JepSet& jeps, const Dataset& dataset);
Json sweep_json(const LambdaSweep* lambda_sweep, std::span<const TreeSweepPoint> tree_curve,
                std::size_t chosen_trees);
// Every grid map of the sweep: {"lambdas": [...], "recommended": x, "maps": [map.json...]}.
Json maps_json(const LambdaSweep& sweep, const JepSet& jeps, const Dataset& dataset);
Json manifest_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& json);

// Two-space indented JSON with a trailing newline.
std::string dump(const Json& json);

// A run's output directory read back.
struct ArtifactSet {
  RunManifest manifest;
  Dataset dataset;
  JepSet jeps;
  Json matrix;
  Json sweep;
  std::optional<Json> map;
  std::optional<Json> maps;
};

// Re-ingests dataset.csv and rebuilds the JEP set from patterns.json, checking
// every stored row set against its selectors. Throws InputError on missing or
// malformed files, ConsistencyError when the files disagree.
ArtifactSet load_artifacts(const std::filesystem::path& directory);

// Parses patterns.json against `dataset`.
JepSet jeps_from_json(const Json& json, const Dataset& dataset);

}  // namespace vax
