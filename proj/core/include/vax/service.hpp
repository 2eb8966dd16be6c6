#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vax/artifacts.hpp"
#include "vax/explain.hpp"

namespace vax {

// One loaded artifact set plus everything derived from it at startup. Never
// modified afterwards, so requests can read it from any thread.
class Session {
 public:
  explicit Session(ArtifactSet artifacts);
  static std::shared_ptr<const Session> load(const std::filesystem::path& directory);

  const ArtifactSet& artifacts() const { return artifacts_; }
  const Dataset& dataset() const { return artifacts_.dataset; }
  const JepSet& jeps() const { return artifacts_.jeps; }
  const ExplanationModel& model() const { return model_; }
  const std::vector<long>& pattern_of_row() const { return pattern_of_row_; }
  // Grid of precomputed maps, ascending, with each map serialized once.
  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<std::string>& map_bodies() const { return map_bodies_; }
  std::optional<double> recommended_lambda() const { return recommended_; }
  std::optional<std::size_t> pattern_index(std::size_t pattern_id) const;

 private:
  ArtifactSet artifacts_;
  ExplanationModel model_;
  std::vector<long> pattern_of_row_;
  std::vector<double> lambdas_;
  std::vector<std::string> map_bodies_;
  std::optional<double> recommended_;
  std::map<std::size_t, std::size_t> index_of_id_;
};

struct Request {
  std::string method = "GET";
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The HTTP API without the transport:
//   GET  /api/meta
//   GET  /api/patterns?classes=&min_support=&coverage_target=&instances=&order=
//   GET  /api/map?lambda=<x|auto>
//   POST /api/selection  {"instance_ids": [...]}
//   GET  /api/histogram?pattern=<id>&variable=<name>
//   GET  /api/schema[/<name>]
//   GET  /api/health
// Without a session every data endpoint answers 503.
class Service {
 public:
  Service() = default;
  explicit Service(std::shared_ptr<const Session> session) : session_(std::move(session)) {}

  Response handle(const Request& request) const;

 private:
  std::shared_ptr<const Session> session_;
};

// JSON Schemas (draft-07) of every response and artifact, keyed by name.
const Json& api_schemas();

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  std::optional<std::filesystem::path> ui_directory;  // static files served at /
};

class Server {
 public:
  Server(Service service, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket and returns the port. Throws std::runtime_error on failure.
  int bind();
  // Serves until stop(); bind() first.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vax
