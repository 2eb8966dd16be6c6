#include "vax/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "vax/error.hpp"
#include "vax/pipeline.hpp"

namespace vax {
namespace {

Response json_response(const Json& body, int status = 200) { return {status, dump(body), "application/json"}; }

Response error_response(int status, const std::string& message) { return json_response(Json{{"error", message}}, status); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& name, const std::string& text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
    throw InputError("parameter '" + name + "' is not a number: '" + text + "'");
  return value;
}

std::optional<std::string> param(const Request& request, const std::string& name) {
  const auto it = request.params.find(name);
  if (it == request.params.end()) return std::nullopt;
  return it->second;
}

Response meta(const Session& s) {
  const Dataset& d = s.dataset();
  Json classes = Json::array();
  for (std::size_t c = 0; c < d.n_classes(); ++c)
    classes.push_back({{"name", d.classes()[c]}, {"size", d.class_size(static_cast<int>(c))}});
  Json variables = Json::array();
  for (std::size_t v = 0; v < d.n_vars(); ++v) {
    Json var = {{"name", d.variable_names()[v]},
                {"importance", s.model().importance[v]},
                {"min", d.variable_ranges()[v].min},
                {"max", d.variable_ranges()[v].max}};
    if (d.is_categorical(v)) var["categories"] = d.categories(v);
    variables.push_back(std::move(var));
  }
  Json column_order = Json::array();
  for (std::size_t v : s.model().column_order) column_order.push_back(d.variable_names()[v]);
  return json_response(Json{{"schema_version", kSchemaVersion},
                            {"dataset", {{"n_rows", d.n_rows()}, {"n_vars", d.n_vars()}, {"label_column", d.label_name()}}},
                            {"classes", std::move(classes)},
                            {"variables", std::move(variables)},
                            {"column_order", std::move(column_order)},
                            {"pattern_count", s.jeps().patterns.size()},
                            {"lambdas", s.lambdas()},
                            {"recommended_lambda", s.recommended_lambda() ? Json(*s.recommended_lambda()) : Json(nullptr)},
                            {"manifest", manifest_json(s.artifacts().manifest)}});
}

Response patterns(const Session& s, const Request& request) {
  const Dataset& d = s.dataset();
  FilterCriteria criteria;
  if (auto v = param(request, "min_support")) criteria.min_support = parse_double("min_support", *v);
  if (auto v = param(request, "coverage_target")) criteria.coverage_target = parse_double("coverage_target", *v);
  if (auto v = param(request, "classes")) {
    std::vector<int> ids;
    for (const auto& name : split_list(*v)) {
      const auto c = d.class_index(name);
      if (!c) throw InputError("unknown class '" + name + "'");
      ids.push_back(*c);
    }
    criteria.classes = std::move(ids);
  }
  if (auto v = param(request, "instances")) criteria.instance_ids = split_list(*v);
  RowOrder order = RowOrder::kSupport;
  if (auto v = param(request, "order")) {
    const auto parsed = parse_row_order(*v);
    if (!parsed) throw InputError("unknown order '" + *v + "'");
    order = *parsed;
  }

  const std::vector<std::size_t> kept = filter_patterns(s.jeps(), d, criteria);
  const JepSet sub = subset(s.jeps(), kept);
  std::vector<std::size_t> served;
  for (std::size_t i : order_rows(sub, order)) served.push_back(kept[i]);
  return json_response(Json{{"order", to_string(order)},
                            {"count", served.size()},
                            {"rows", matrix_rows_json(s.model(), d, served)}});
}

Response map(const Session& s, const Request& request) {
  if (s.lambdas().empty()) return error_response(404, "this run has no embedding");
  const std::string requested = param(request, "lambda").value_or("auto");
  double lambda = 0.0;
  if (requested == "auto") {
    lambda = *s.recommended_lambda();
  } else {
    lambda = parse_double("lambda", requested);
    if (lambda < 0.0 || lambda > 1.0) throw InputError("lambda must lie in [0, 1]");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.lambdas().size(); ++i)
    if (std::abs(s.lambdas()[i] - lambda) < std::abs(s.lambdas()[best] - lambda)) best = i;
  return {200, s.map_bodies()[best], "application/json"};
}

Response selection(const Session& s, const Request& request) {
  Json body;
  try {
    body = Json::parse(request.body);
  } catch (const nlohmann::json::exception&) {
    throw InputError("request body is not JSON");
  }
  if (!body.is_object() || !body.contains("instance_ids") || !body["instance_ids"].is_array())
    throw InputError("request body needs an 'instance_ids' array");
  std::vector<std::string> ids;
  for (const auto& id : body["instance_ids"]) {
    if (!id.is_string()) throw InputError("instance ids must be strings");
    ids.push_back(id.get<std::string>());
  }
  const InstanceExplanation found = explain_instances(s.jeps(), s.dataset(), ids);
  Json per_instance = Json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& k = found.pattern_of[i];
    per_instance.push_back({{"instance_id", ids[i]}, {"pattern_id", k ? Json(s.jeps().patterns[*k].id) : Json(nullptr)}});
  }
  Json pattern_ids = Json::array();
  for (std::size_t k : found.patterns) pattern_ids.push_back(s.jeps().patterns[k].id);
  Json filter_ids = Json::array();
  for (const auto& id : ids)
    if (std::find(found.unsupported.begin(), found.unsupported.end(), id) == found.unsupported.end()) filter_ids.push_back(id);
  return json_response(Json{{"instances", std::move(per_instance)},
                            {"pattern_ids", std::move(pattern_ids)},
                            {"unsupported", found.unsupported},
                            {"rows", matrix_rows_json(s.model(), s.dataset(), found.patterns)},
                            {"filter", {{"instances", std::move(filter_ids)}}}});
}

Response histogram(const Session& s, const Request& request) {
  const auto pattern_text = param(request, "pattern");
  const auto variable = param(request, "variable");
  if (!pattern_text || !variable) throw InputError("histogram needs 'pattern' and 'variable'");
  const double id = parse_double("pattern", *pattern_text);
  if (id < 0 || id != std::floor(id)) throw InputError("pattern must be a pattern id");
  const auto k = s.pattern_index(static_cast<std::size_t>(id));
  if (!k) throw InputError("unknown pattern " + *pattern_text);
  const auto& names = s.dataset().variable_names();
  const auto it = std::find(names.begin(), names.end(), *variable);
  if (it == names.end()) throw InputError("unknown variable '" + *variable + "'");
  const auto v = static_cast<std::size_t>(it - names.begin());
  const Pattern& p = s.jeps().patterns[*k];
  return json_response(Json{{"pattern_id", p.id},
                            {"variable", *variable},
                            {"selector", find_selector(p.selectors, v) != nullptr},
                            {"edges", s.model().edges[v]},
                            {"counts", bin_counts(s.dataset(), v, p.rows, s.model().edges[v])}});
}

}  // namespace

Session::Session(ArtifactSet artifacts) : artifacts_(std::move(artifacts)) {
  MatrixOptions options;
  options.bins = artifacts_.manifest.histogram_bins;
  model_ = build_matrix_model(artifacts_.jeps, artifacts_.dataset, options);
  pattern_of_row_ = pattern_of_rows(artifacts_.jeps);
  for (std::size_t k = 0; k < artifacts_.jeps.patterns.size(); ++k) index_of_id_[artifacts_.jeps.patterns[k].id] = k;
  if (artifacts_.maps) {
    const Json& maps = *artifacts_.maps;
    lambdas_ = maps.at("lambdas").get<std::vector<double>>();
    for (const auto& m : maps.at("maps")) map_bodies_.push_back(dump(m));
    if (lambdas_.size() != map_bodies_.size() || lambdas_.empty()) throw InputError("maps.json: malformed grid");
    recommended_ = maps.at("recommended").get<double>();
  }
}

std::shared_ptr<const Session> Session::load(const std::filesystem::path& directory) {
  return std::make_shared<const Session>(load_artifacts(directory));
}

std::optional<std::size_t> Session::pattern_index(std::size_t pattern_id) const {
  const auto it = index_of_id_.find(pattern_id);
  if (it == index_of_id_.end()) return std::nullopt;
  return it->second;
}

Response Service::handle(const Request& request) const {
  const std::string& path = request.path;
  try {
    if (path == "/api/health") return json_response(Json{{"status", "ok"}, {"loaded", session_ != nullptr}});
    if (path == "/api/schema") return json_response(api_schemas());
    if (path.rfind("/api/schema/", 0) == 0) {
      const std::string name = path.substr(12);
      if (!api_schemas().contains(name)) return error_response(404, "no schema named '" + name + "'");
      return json_response(api_schemas()[name]);
    }
    const bool known = path == "/api/meta" || path == "/api/patterns" || path == "/api/map" ||
                       path == "/api/histogram" || path == "/api/selection";
    if (!known) return error_response(404, "no such endpoint: " + path);
    if (request.method != (path == "/api/selection" ? "POST" : "GET"))
      return error_response(405, "method " + request.method + " not allowed on " + path);
    if (!session_) return error_response(503, "no artifact set loaded");
    if (path == "/api/meta") return meta(*session_);
    if (path == "/api/patterns") return patterns(*session_, request);
    if (path == "/api/map") return map(*session_, request);
    if (path == "/api/histogram") return histogram(*session_, request);
    return selection(*session_, request);
  } catch (const InputError& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

struct Server::Impl {
  Service service;
  ServerOptions options;
  httplib::Server http;
  int port = -1;
};

Server::Server(Service service, ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->options = std::move(options);
  Impl& impl = *impl_;

  auto cors = [&impl](httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", impl.options.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  auto forward = [&impl, cors](const httplib::Request& req, httplib::Response& res) {
    Request request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.params.emplace(key, value);
    const Response out = impl.service.handle(request);
    res.status = out.status;
    res.set_content(out.body, out.content_type.c_str());
    cors(res);
  };
  impl.http.Get(R"(/api/.*)", forward);
  impl.http.Post(R"(/api/.*)", forward);
  impl.http.Options(R"(/api/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    cors(res);
  });
  if (impl.options.ui_directory && !impl.http.set_mount_point("/", impl.options.ui_directory->string()))
    throw std::runtime_error("UI directory not found: " + impl.options.ui_directory->string());
}

Server::~Server() { stop(); }

int Server::bind() {
  Impl& impl = *impl_;
  if (impl.options.port == 0) {
    impl.port = impl.http.bind_to_any_port(impl.options.host.c_str());
  } else {
    impl.port = impl.http.bind_to_port(impl.options.host.c_str(), impl.options.port) ? impl.options.port : -1;
  }
  if (impl.port < 0) throw std::runtime_error("cannot bind " + impl.options.host + ":" + std::to_string(impl.options.port));
  return impl.port;
}

void Server::serve() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace vax
