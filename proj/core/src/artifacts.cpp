#include "vax/artifacts.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vax/error.hpp"

namespace vax {
namespace {

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json growth_json(double gr) { return std::isinf(gr) ? Json("inf") : Json(gr); }

std::size_t variable_index(const Dataset& dataset, const std::string& name) {
  const auto& names = dataset.variable_names();
  for (std::size_t v = 0; v < names.size(); ++v)
    if (names[v] == name) return v;
  throw InputError("unknown variable '" + name + "'");
}

template <class T>
T field(const Json& json, const char* key) {
  if (!json.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

std::vector<long> pattern_of_rows(const JepSet& jeps) {
  std::vector<long> out(jeps.n_rows, -1);
  for (std::size_t k = 0; k < jeps.patterns.size(); ++k)
    for (RowIndex r : jeps.patterns[k].rows) out.at(r) = static_cast<long>(k);
  return out;
}

Json patterns_json(const JepSet& jeps, const Dataset& dataset) {
  Json out = Json::array();
  for (std::size_t k = 0; k < jeps.patterns.size(); ++k) {
    const Pattern& p = jeps.patterns[k];
    Json selectors = Json::array();
    for (const auto& s : p.selectors)
      selectors.push_back({{"variable", dataset.variable_names()[s.variable]}, {"low", s.interval.low}, {"high", s.interval.high}});
    Json ids = Json::array();
    for (RowIndex r : p.rows) ids.push_back(dataset.instance_ids()[r]);
    out.push_back({{"id", p.id},
                   {"class", dataset.classes()[static_cast<std::size_t>(p.class_id)]},
                   {"selectors", std::move(selectors)},
                   {"support", p.support},
                   {"support_count", p.rows.size()},
                   {"growth_rate", growth_json(p.growth_rate)},
                   {"confidence", p.confidence},
                   {"fet_p", p.fet_p},
                   {"supported_instance_ids", std::move(ids)},
                   {"aggregated_from", p.aggregated_from},
                   {"cumulative_coverage", jeps.cumulative_coverage.at(k)}});
  }
  return out;
}

Json matrix_rows_json(const ExplanationModel& model, const Dataset& dataset, std::span<const std::size_t> order) {
  const std::vector<double> coverage = cumulative_coverage(subset(model.jeps, order), [&] {
    std::vector<std::size_t> identity(order.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    return identity;
  }());
  Json rows = Json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t k = order[i];
    const Pattern& p = model.jeps.patterns.at(k);
    Json cells = Json::array();
    for (const auto& cell : model.cells[k])
      cells.push_back({{"variable", dataset.variable_names()[cell.variable]}, {"selector", cell.has_selector}, {"counts", cell.counts}});
    Json selectors = Json::array();
    for (const auto& s : p.selectors)
      selectors.push_back({{"variable", dataset.variable_names()[s.variable]}, {"low", s.interval.low}, {"high", s.interval.high}});
    rows.push_back({{"pattern_id", p.id},
                    {"class", dataset.classes()[static_cast<std::size_t>(p.class_id)]},
                    {"support", p.support},
                    {"support_count", p.rows.size()},
                    {"cumulative_coverage", coverage[i]},
                    {"fet_p", p.fet_p},
                    {"fet_significant", p.fet_p < kSignificanceLevel},
                    {"selectors", std::move(selectors)},
                    {"cells", std::move(cells)}});
  }
  return rows;
}

Json matrix_json(const ExplanationModel& model, const Dataset& dataset) {
  Json variables = Json::array();
  for (std::size_t v = 0; v < dataset.n_vars(); ++v) {
    Json var = {{"name", dataset.variable_names()[v]}, {"importance", model.importance[v]}, {"edges", model.edges[v]}};
    if (dataset.is_categorical(v)) var["categories"] = dataset.categories(v);
    variables.push_back(std::move(var));
  }
  Json global = Json::array();
  for (std::size_t c = 0; c < dataset.n_classes(); ++c) {
    Json per_var = Json::array();
    for (std::size_t v = 0; v < dataset.n_vars(); ++v)
      per_var.push_back({{"variable", dataset.variable_names()[v]}, {"counts", model.global_counts[c][v]}});
    global.push_back({{"class", dataset.classes()[c]}, {"histograms", std::move(per_var)}});
  }
  Json columns = Json::array();
  for (std::size_t v : model.column_order) columns.push_back(dataset.variable_names()[v]);
  return Json{{"schema_version", kSchemaVersion},
              {"classes", dataset.classes()},
              {"variables", std::move(variables)},
              {"global_histograms", std::move(global)},
              {"rows", matrix_rows_json(model, dataset, model.row_order)},
              {"order", to_string(model.order)},
              {"column_order", std::move(columns)},
              {"log_scale", model.log_scale}};
}

Json map_json(const EmbeddingResult& map, const JepSet& jeps, const Dataset& dataset) {
  const auto owner = pattern_of_rows(jeps);
  Json points = Json::array();
  for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    points.push_back({{"instance_id", dataset.instance_ids()[i]},
                      {"x", map.coordinates(r, 0)},
                      {"y", map.coordinates(r, 1)},
                      {"class", dataset.classes()[static_cast<std::size_t>(dataset.label(i))]},
                      {"pattern_id", owner[i] < 0 ? Json(nullptr) : Json(jeps.patterns[static_cast<std::size_t>(owner[i])].id)}});
  }
  return Json{{"lambda", map.lambda},
              {"points", std::move(points)},
              {"stress", map.stress},
              {"silhouette_inverted", map.silhouette_inverted}};
}

Json sweep_json(const LambdaSweep* lambda_sweep, std::span<const TreeSweepPoint> tree_curve, std::size_t chosen_trees) {
  Json lambdas = Json::array();
  Json recommended = nullptr;
  if (lambda_sweep) {
    for (const auto& p : lambda_sweep->curve)
      lambdas.push_back({{"lambda", p.lambda}, {"stress", p.stress}, {"silhouette_inverted", p.silhouette_inverted}});
    recommended = lambda_sweep->recommended_lambda();
  }
  Json trees = Json::array();
  for (const auto& p : tree_curve)
    trees.push_back({{"trees", p.trees}, {"coverage", p.coverage}, {"raw_patterns", p.raw_patterns}, {"selected", p.selected}});
  return Json{{"schema_version", kSchemaVersion},
              {"lambda_curve", std::move(lambdas)},
              {"recommended_lambda", std::move(recommended)},
              {"tree_curve", std::move(trees)},
              {"chosen_trees", chosen_trees}};
}

Json maps_json(const LambdaSweep& sweep, const JepSet& jeps, const Dataset& dataset) {
  Json lambdas = Json::array(), maps = Json::array();
  for (const auto& p : sweep.curve) {
    lambdas.push_back(p.lambda);
    maps.push_back(map_json(p, jeps, dataset));
  }
  return Json{{"lambdas", std::move(lambdas)}, {"recommended", sweep.recommended_lambda()}, {"maps", std::move(maps)}};
}

Json manifest_json(const RunManifest& m) {
  auto opt = [](const auto& value) { return value ? Json(*value) : Json(nullptr); };
  return Json{{"schema_version", kSchemaVersion},
              {"label_column", m.label_column},
              {"id_column", m.id_column},
              {"seed", m.seed},
              {"trees", m.trees},
              {"trees_auto", m.trees_auto},
              {"full_coverage", m.full_coverage},
              {"lambda", opt(m.lambda)},
              {"lambda_auto", m.lambda_auto},
              {"stress_reference", m.stress_reference},
              {"histogram_bins", opt(m.histogram_bins)},
              {"discretize_bins", opt(m.discretize_bins)},
              {"bin_edges", m.bin_edges},
              {"rows_read", m.rows_read},
              {"dropped_missing", m.dropped_missing},
              {"dropped_ambiguous", m.dropped_ambiguous},
              {"n_rows", m.n_rows},
              {"n_vars", m.n_vars},
              {"classes", m.classes},
              {"raw_patterns", m.raw_patterns},
              {"selected", m.selected},
              {"aggregated", m.aggregated},
              {"discarded", m.discarded},
              {"coverage", m.coverage},
              {"fingerprint", m.fingerprint}};
}

RunManifest manifest_from_json(const Json& j) {
  if (field<int>(j, "schema_version") != kSchemaVersion) throw InputError("unsupported manifest schema version");
  RunManifest m;
  m.label_column = field<std::string>(j, "label_column");
  m.id_column = field<std::string>(j, "id_column");
  m.seed = field<std::uint64_t>(j, "seed");
  m.trees = field<std::size_t>(j, "trees");
  m.trees_auto = field<bool>(j, "trees_auto");
  m.full_coverage = field<bool>(j, "full_coverage");
  if (!j.at("lambda").is_null()) m.lambda = field<double>(j, "lambda");
  m.lambda_auto = field<bool>(j, "lambda_auto");
  m.stress_reference = field<std::string>(j, "stress_reference");
  if (!j.at("histogram_bins").is_null()) m.histogram_bins = field<std::size_t>(j, "histogram_bins");
  if (!j.at("discretize_bins").is_null()) m.discretize_bins = field<int>(j, "discretize_bins");
  m.bin_edges = field<std::vector<double>>(j, "bin_edges");
  m.rows_read = field<std::size_t>(j, "rows_read");
  m.dropped_missing = field<std::size_t>(j, "dropped_missing");
  m.dropped_ambiguous = field<std::size_t>(j, "dropped_ambiguous");
  m.n_rows = field<std::size_t>(j, "n_rows");
  m.n_vars = field<std::size_t>(j, "n_vars");
  m.classes = field<std::vector<std::string>>(j, "classes");
  m.raw_patterns = field<std::size_t>(j, "raw_patterns");
  m.selected = field<std::size_t>(j, "selected");
  m.aggregated = field<std::size_t>(j, "aggregated");
  m.discarded = field<std::size_t>(j, "discarded");
  m.coverage = field<double>(j, "coverage");
  m.fingerprint = field<std::string>(j, "fingerprint");
  return m;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

JepSet jeps_from_json(const Json& json, const Dataset& dataset) {
  if (!json.is_array()) throw InputError("patterns.json must hold an array");
  JepSet jeps;
  jeps.n_rows = dataset.n_rows();
  for (const Json& item : json) {
    Pattern p;
    p.id = field<std::size_t>(item, "id");
    const auto cls = dataset.class_index(field<std::string>(item, "class"));
    if (!cls) throw InputError("patterns.json: unknown class");
    p.class_id = *cls;
    for (const Json& s : field<Json>(item, "selectors")) {
      p.selectors.push_back({variable_index(dataset, field<std::string>(s, "variable")),
                             {field<double>(s, "low"), field<double>(s, "high")}});
    }
    std::sort(p.selectors.begin(), p.selectors.end(),
              [](const Selector& a, const Selector& b) { return a.variable < b.variable; });
    for (const auto& id : field<std::vector<std::string>>(item, "supported_instance_ids")) {
      const auto row = dataset.row_of(id);
      if (!row) throw InputError("patterns.json: unknown instance id '" + id + "'");
      p.rows.push_back(*row);
    }
    std::sort(p.rows.begin(), p.rows.end());
    if (matching_rows(dataset, p.selectors) != p.rows)
      throw ConsistencyError("patterns.json: pattern " + std::to_string(p.id) + " rows disagree with its selectors");
    compute_metrics(p, dataset);
    p.aggregated_from = field<std::size_t>(item, "aggregated_from");
    jeps.patterns.push_back(std::move(p));
  }
  refresh_coverage(jeps);
  return jeps;
}

ArtifactSet load_artifacts(const std::filesystem::path& dir) {
  const RunManifest manifest = manifest_from_json(read_json(dir / "manifest.json"));
  IngestConfig config;
  config.label_column = manifest.label_column;
  config.id_column = manifest.id_column;
  config.class_order = manifest.classes;
  config.drop_ambiguous = false;
  Ingested ingested = ingest_csv_text(read_text(dir / "dataset.csv"), config);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fingerprint(ingested.dataset)));
  if (hex != manifest.fingerprint) throw ConsistencyError("dataset.csv does not match the manifest fingerprint");

  ArtifactSet set{manifest, std::move(ingested.dataset), {}, {}, {}, {}, {}};
  set.jeps = jeps_from_json(read_json(dir / "patterns.json"), set.dataset);
  set.matrix = read_json(dir / "matrix.json");
  set.sweep = read_json(dir / "sweep.json");
  if (std::filesystem::exists(dir / "map.json")) set.map = read_json(dir / "map.json");
  if (std::filesystem::exists(dir / "maps.json")) set.maps = read_json(dir / "maps.json");
  return set;
}

}  // namespace vax
