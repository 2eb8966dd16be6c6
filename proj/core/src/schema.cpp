#include "vax/service.hpp"

namespace vax {
namespace {

Json type(const char* name) { return Json{{"type", name}}; }

Json number_in(double lo, double hi) { return Json{{"type", "number"}, {"minimum", lo}, {"maximum", hi}}; }

Json count() { return Json{{"type", "integer"}, {"minimum", 0}}; }

Json array_of(Json items) { return Json{{"type", "array"}, {"items", std::move(items)}}; }

Json nullable(const char* name) { return Json{{"type", Json::array({name, "null"})}}; }

Json object(Json properties, std::vector<std::string> required) {
  return Json{{"type", "object"}, {"required", std::move(required)}, {"properties", std::move(properties)}};
}

Json selector() {
  return object({{"variable", type("string")}, {"low", type("number")}, {"high", type("number")}},
                {"variable", "low", "high"});
}

Json matrix_row() {
  return object({{"pattern_id", count()},
                 {"class", type("string")},
                 {"support", number_in(0, 1)},
                 {"support_count", count()},
                 {"cumulative_coverage", number_in(0, 1)},
                 {"fet_p", number_in(0, 1)},
                 {"fet_significant", type("boolean")},
                 {"selectors", array_of(selector())},
                 {"cells", array_of(object({{"variable", type("string")},
                                            {"selector", type("boolean")},
                                            {"counts", array_of(count())}},
                                           {"variable", "selector", "counts"}))}},
                {"pattern_id", "class", "support", "support_count", "cumulative_coverage", "fet_p", "fet_significant",
                 "selectors", "cells"});
}

Json map_schema() {
  return object({{"lambda", number_in(0, 1)},
                 {"points", array_of(object({{"instance_id", type("string")},
                                             {"x", type("number")},
                                             {"y", type("number")},
                                             {"class", type("string")},
                                             {"pattern_id", nullable("integer")}},
                                            {"instance_id", "x", "y", "class", "pattern_id"}))},
                 {"stress", number_in(0, 1)},
                 {"silhouette_inverted", number_in(0, 1)}},
                {"lambda", "points", "stress", "silhouette_inverted"});
}

Json manifest_schema() {
  return object({{"schema_version", count()},
                 {"label_column", type("string")},
                 {"id_column", type("string")},
                 {"seed", count()},
                 {"trees", count()},
                 {"trees_auto", type("boolean")},
                 {"full_coverage", type("boolean")},
                 {"lambda", nullable("number")},
                 {"lambda_auto", type("boolean")},
                 {"stress_reference", Json{{"enum", {"weighted", "original"}}}},
                 {"histogram_bins", nullable("integer")},
                 {"discretize_bins", nullable("integer")},
                 {"bin_edges", array_of(type("number"))},
                 {"rows_read", count()},
                 {"dropped_missing", count()},
                 {"dropped_ambiguous", count()},
                 {"n_rows", count()},
                 {"n_vars", count()},
                 {"classes", array_of(type("string"))},
                 {"raw_patterns", count()},
                 {"selected", count()},
                 {"aggregated", count()},
                 {"discarded", count()},
                 {"coverage", number_in(0, 1)},
                 {"fingerprint", type("string")}},
                {"schema_version", "label_column", "seed", "trees", "raw_patterns", "selected", "aggregated",
                 "discarded", "coverage", "fingerprint", "classes"});
}

Json build() {
  Json schemas = Json::object();
  const auto draft = "http://json-schema.org/draft-07/schema#";

  schemas["meta"] = object(
      {{"schema_version", count()},
       {"dataset", object({{"n_rows", count()}, {"n_vars", count()}, {"label_column", type("string")}},
                          {"n_rows", "n_vars", "label_column"})},
       {"classes", array_of(object({{"name", type("string")}, {"size", count()}}, {"name", "size"}))},
       {"variables", array_of(object({{"name", type("string")},
                                      {"importance", number_in(0, 1)},
                                      {"min", type("number")},
                                      {"max", type("number")},
                                      {"categories", array_of(type("string"))}},
                                     {"name", "importance", "min", "max"}))},
       {"column_order", array_of(type("string"))},
       {"pattern_count", count()},
       {"lambdas", array_of(number_in(0, 1))},
       {"recommended_lambda", nullable("number")},
       {"manifest", manifest_schema()}},
      {"schema_version", "dataset", "classes", "variables", "pattern_count", "manifest"});

  schemas["patterns"] = object(
      {{"order", Json{{"enum", {"support", "class", "class_and_support"}}}}, {"count", count()}, {"rows", array_of(matrix_row())}},
      {"order", "count", "rows"});

  schemas["map"] = map_schema();

  schemas["selection"] = object(
      {{"instances", array_of(object({{"instance_id", type("string")}, {"pattern_id", nullable("integer")}},
                                     {"instance_id", "pattern_id"}))},
       {"pattern_ids", array_of(count())},
       {"unsupported", array_of(type("string"))},
       {"rows", array_of(matrix_row())},
       {"filter", object({{"instances", array_of(type("string"))}}, {"instances"})}},
      {"instances", "pattern_ids", "unsupported", "rows", "filter"});

  schemas["histogram"] = object({{"pattern_id", count()},
                                 {"variable", type("string")},
                                 {"selector", type("boolean")},
                                 {"edges", array_of(type("number"))},
                                 {"counts", array_of(count())}},
                                {"pattern_id", "variable", "selector", "edges", "counts"});

  schemas["patterns.json"] = array_of(object({{"id", count()},
                                              {"class", type("string")},
                                              {"selectors", array_of(selector())},
                                              {"support", number_in(0, 1)},
                                              {"support_count", count()},
                                              {"growth_rate", Json{{"type", Json::array({"number", "string"})}}},
                                              {"confidence", number_in(0, 1)},
                                              {"fet_p", number_in(0, 1)},
                                              {"supported_instance_ids", array_of(type("string"))},
                                              {"aggregated_from", count()},
                                              {"cumulative_coverage", number_in(0, 1)}},
                                             {"id", "class", "selectors", "support", "confidence", "fet_p",
                                              "supported_instance_ids", "aggregated_from", "cumulative_coverage"}));

  schemas["matrix.json"] = object(
      {{"schema_version", count()},
       {"classes", array_of(type("string"))},
       {"variables", array_of(object({{"name", type("string")},
                                      {"importance", number_in(0, 1)},
                                      {"edges", array_of(type("number"))}},
                                     {"name", "importance", "edges"}))},
       {"global_histograms",
        array_of(object({{"class", type("string")},
                         {"histograms", array_of(object({{"variable", type("string")}, {"counts", array_of(count())}},
                                                         {"variable", "counts"}))}},
                        {"class", "histograms"}))},
       {"rows", array_of(matrix_row())},
       {"order", Json{{"enum", {"support", "class", "class_and_support"}}}},
       {"column_order", array_of(type("string"))},
       {"log_scale", type("boolean")}},
      {"classes", "variables", "global_histograms", "rows", "order"});

  schemas["map.json"] = map_schema();
  schemas["manifest.json"] = manifest_schema();

  for (auto& [name, schema] : schemas.items()) {
    Json tagged = Json{{"$schema", draft}, {"title", name}};
    tagged.update(schema);
    schema = std::move(tagged);
  }
  return schemas;
}

}  // namespace

const Json& api_schemas() {
  static const Json schemas = build();
  return schemas;
}

}  // namespace vax
