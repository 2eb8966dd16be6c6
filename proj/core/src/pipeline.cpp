#include "vax/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "vax/error.hpp"

namespace vax {
namespace {

std::string stress_name(StressReference r) { return r == StressReference::kWeighted ? "weighted" : "original"; }

std::string tagged(const char* stage, const char* message) {
  const std::string prefix = std::string(stage) + ": ";
  return std::string_view(message).starts_with(prefix) ? message : prefix + message;
}

// Runs `fn`, timing it, and tags any failure with the stage name.
template <class Fn>
auto stage(const char* name, std::vector<StageTiming>& timings, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    timings.push_back({name, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto value = fn();
      record();
      return value;
    }
  } catch (const InputError& e) {
    throw InputError(tagged(name, e.what()));
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(tagged(name, e.what()));
  } catch (const std::exception& e) {
    throw std::runtime_error(tagged(name, e.what()));
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::vector<std::string> artifact_files(bool embedded) {
  std::vector<std::string> files = {"dataset.csv", "patterns.json", "matrix.json", "sweep.json"};
  if (embedded) {
    files.push_back("map.json");
    files.push_back("maps.json");
  }
  files.push_back("manifest.json");
  return files;
}

RunResult run_on(Dataset dataset, IngestReport report, const RunConfig& config) {
  RunResult r{std::move(dataset), std::move(report), {}, {}, {}, {}, {}, {}, {}, {}};
  const Dataset& d = r.dataset;

  if (config.trees) {
    r.raw = stage("mine", r.timings, [&] { return mine(d, *config.trees, config.seed); });
    r.selection = stage("select", r.timings, [&] { return select_and_aggregate(r.raw, d); });
    r.manifest.trees = *config.trees;
    r.tree_curve.push_back({*config.trees, r.selection.jeps.coverage, r.raw.size(), r.selection.stats.selected});
  } else {
    TreeSweep sweep = stage("tree-sweep", r.timings, [&] { return sweep_trees(d, config.tree_schedule, config.seed); });
    r.tree_curve = std::move(sweep.curve);
    r.raw = std::move(sweep.raw);
    r.selection = std::move(sweep.selection);
    r.manifest.trees = sweep.chosen_trees;
    r.manifest.trees_auto = true;
  }
  const JepSet& jeps = r.selection.jeps;
  r.manifest.full_coverage = jeps.n_rows > 0 && jeps.coverage == 1.0;

  r.model = stage("matrix", r.timings, [&] {
    MatrixOptions options;
    options.order = config.order;
    options.bins = config.histogram_bins;
    return build_matrix_model(jeps, d, options);
  });

  if (config.embed) {
    r.sweep = stage("lambda-sweep", r.timings, [&] {
      return sweep_lambda(d, jeps, config.lambda_grid, config.stress_reference);
    });
    r.map = stage("embed", r.timings, [&] {
      if (!config.lambda) return r.sweep->curve[r.sweep->recommended];
      for (const auto& point : r.sweep->curve)
        if (point.lambda == *config.lambda) return point;
      return embed_at(extend(d, jeps), *config.lambda, config.stress_reference);
    });
    r.manifest.lambda = r.map->lambda;
    r.manifest.lambda_auto = !config.lambda;
  }

  RunManifest& m = r.manifest;
  m.label_column = d.label_name();
  m.id_column = d.id_name();
  m.seed = config.seed;
  m.stress_reference = stress_name(config.stress_reference);
  m.histogram_bins = config.histogram_bins;
  m.discretize_bins = config.ingest.discretize_bins;
  m.bin_edges = r.report.bin_edges;
  m.rows_read = r.report.rows_read;
  m.dropped_missing = r.report.dropped_missing;
  m.dropped_ambiguous = r.report.dropped_ambiguous;
  m.n_rows = d.n_rows();
  m.n_vars = d.n_vars();
  m.classes = d.classes();
  m.raw_patterns = r.selection.stats.raw;
  m.selected = r.selection.stats.selected;
  m.aggregated = r.selection.stats.aggregated;
  m.discarded = r.selection.stats.discarded;
  m.coverage = jeps.coverage;
  m.fingerprint = hex64(fingerprint(d));
  if (m.selected + m.aggregated + m.discarded != m.raw_patterns)
    throw ConsistencyError("select: selected + aggregated + discarded != raw patterns");
  return r;
}

std::string raw_patterns_jsonl(std::span<const RawPattern> raw, const Dataset& dataset) {
  std::string out;
  for (const auto& p : raw) {
    Json selectors = Json::array();
    for (const auto& s : p.selectors)
      selectors.push_back({{"variable", dataset.variable_names()[s.variable]}, {"low", s.interval.low}, {"high", s.interval.high}});
    out += Json{{"id", p.id},
                {"class", dataset.classes()[static_cast<std::size_t>(p.class_id)]},
                {"selectors", std::move(selectors)},
                {"support_count", p.rows.size()}}
               .dump();
    out += '\n';
  }
  return out;
}

void write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
  const Dataset& d = r.dataset;
  const JepSet& jeps = r.selection.jeps;
  write_file(dir / "dataset.csv", to_canonical_csv(d));
  write_file(dir / "patterns.json", dump(patterns_json(jeps, d)));
  write_file(dir / "matrix.json", dump(matrix_json(r.model, d)));
  write_file(dir / "sweep.json", dump(sweep_json(r.sweep ? &*r.sweep : nullptr, r.tree_curve, r.manifest.trees)));
  if (r.map) {
    write_file(dir / "map.json", dump(map_json(*r.map, jeps, d)));
    write_file(dir / "maps.json", dump(maps_json(*r.sweep, jeps, d)));
  }
  write_file(dir / "manifest.json", dump(manifest_json(r.manifest)));
}

RunResult run(const RunConfig& config) {
  std::vector<StageTiming> timings;
  Ingested ingested = stage("ingest", timings, [&] { return ingest_csv(config.input, config.ingest); });
  RunResult r = run_on(std::move(ingested.dataset), std::move(ingested.report), config);
  r.timings.insert(r.timings.begin(), timings.begin(), timings.end());
  if (config.output.empty()) return r;

  stage("write", r.timings, [&] {
    namespace fs = std::filesystem;
    fs::create_directories(config.output);
    std::random_device entropy;
    const fs::path staging = config.output / (".vax-staging-" + hex64((std::uint64_t{entropy()} << 32) | entropy()));
    fs::create_directory(staging);
    try {
      write_artifacts(r, staging);
      Json timing = Json::array();
      for (const auto& t : r.timings) timing.push_back({{"stage", t.stage}, {"milliseconds", t.milliseconds}});
      write_file(staging / "timings.json", dump(timing));
      if (config.dump_raw) write_file(staging / "raw_patterns.jsonl", raw_patterns_jsonl(r.raw, r.dataset));
      // A previous run's embed artifacts must not outlive a no-embed run.
      if (!r.map) {
        fs::remove(config.output / "map.json");
        fs::remove(config.output / "maps.json");
      }
      for (const auto& name : artifact_files(r.map.has_value())) fs::rename(staging / name, config.output / name);
      fs::rename(staging / "timings.json", config.output / "timings.json");
      if (config.dump_raw) fs::rename(staging / "raw_patterns.jsonl", config.output / "raw_patterns.jsonl");
      fs::remove_all(staging);
    } catch (...) {
      std::error_code ignored;
      fs::remove_all(staging, ignored);
      throw;
    }
  });
  return r;
}

InstanceExplanation explain_instances(const JepSet& jeps, const Dataset& dataset,
                                      const std::vector<std::string>& instance_ids) {
  const auto owner = pattern_of_rows(jeps);
  InstanceExplanation out;
  std::set<std::size_t> seen;
  for (const auto& id : instance_ids) {
    const auto row = dataset.row_of(id);
    if (!row) throw InputError("unknown instance id '" + id + "'");
    if (owner[*row] < 0) {
      out.pattern_of.push_back(std::nullopt);
      out.unsupported.push_back(id);
    } else {
      const auto k = static_cast<std::size_t>(owner[*row]);
      out.pattern_of.push_back(k);
      seen.insert(k);
    }
  }
  out.patterns.assign(seen.begin(), seen.end());
  return out;
}

InstanceExplanation explain_instances(const ArtifactSet& artifacts, const std::vector<std::string>& instance_ids) {
  return explain_instances(artifacts.jeps, artifacts.dataset, instance_ids);
}

}  // namespace vax
