// vax: mine, explain and serve jumping emerging patterns.
#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vax/error.hpp"
#include "vax/pipeline.hpp"
#include "vax/service.hpp"
#include "vax/synthetic.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitConsistency = 3;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream in(item);
    T value;
    if (!(in >> value) || !in.eof()) throw vax::InputError(std::string("bad ") + what + " value '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw vax::InputError(std::string(what) + " is empty");
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

vax::Server* active_server = nullptr;
void on_signal(int) {
  if (active_server) active_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jumping emerging pattern explanations for labeled tabular data"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Mine, select and embed; write the artifact set");
  vax::RunConfig config;
  std::string trees = "auto", lambda = "auto", tree_schedule, lambda_grid, order = "support",
              stress = "weighted", class_order;
  std::optional<std::size_t> bins;
  std::optional<int> discretize;
  std::optional<std::string> id_column;
  bool no_embed = false;
  run_cmd->add_option("--input", config.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--label-column", config.ingest.label_column, "Class label column")->required();
  run_cmd->add_option("--id-column", id_column, "Instance id column (default: row ordinal)");
  run_cmd->add_option("--seed", config.seed, "Master seed")->default_val(0);
  run_cmd->add_option("--trees", trees, "Tree count, or 'auto' for the coverage schedule")->default_val("auto");
  run_cmd->add_option("--tree-schedule", tree_schedule, "Comma separated, increasing (default 2,4,...,16384)");
  run_cmd->add_option("--lambda", lambda, "Map blend in [0,1], or 'auto'")->default_val("auto");
  run_cmd->add_option("--lambda-grid", lambda_grid, "Comma separated grid (default 0,0.05,...,1)");
  run_cmd->add_option("--stress-reference", stress, "weighted | original")->default_val("weighted");
  run_cmd->add_option("--discretize-bins", discretize, "Equal-width bins for a numeric label column");
  run_cmd->add_option("--class-order", class_order, "Comma separated class names");
  run_cmd->add_flag("--drop-ambiguous,!--keep-ambiguous", config.ingest.drop_ambiguous,
                    "Drop rows whose values also occur with another label (default on)");
  run_cmd->add_option("--bins", bins, "Histogram bins for every variable (default Freedman-Diaconis)");
  run_cmd->add_option("--order", order, "Matrix row order: support | class | class_and_support")->default_val("support");
  run_cmd->add_flag("--no-embed", no_embed, "Skip the similarity map stage");
  run_cmd->add_flag("--dump-raw", config.dump_raw, "Also write raw_patterns.jsonl");
  run_cmd->add_option("--out", config.output, "Artifact directory")->required();

  // explain
  auto* explain_cmd = app.add_subcommand("explain", "Patterns supporting the given instances");
  std::string artifacts_dir, instances;
  explain_cmd->add_option("--artifacts", artifacts_dir, "Artifact directory")->required()->check(CLI::ExistingDirectory);
  explain_cmd->add_option("--instances", instances, "Comma separated instance ids")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "HTTP API over an artifact set");
  vax::ServerOptions server_options;
  std::string serve_dir, ui_dir;
  serve_cmd->add_option("--artifacts", serve_dir, "Artifact directory")->required()->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--port", server_options.port, "0 picks a free port")->default_val(8080);
  serve_cmd->add_option("--host", server_options.host)->default_val("127.0.0.1");
  serve_cmd->add_option("--cors-origin", server_options.cors_origin)->default_val("*");
  serve_cmd->add_option("--ui", ui_dir, "Static UI directory served at /")->check(CLI::ExistingDirectory);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write a generated dataset as CSV");
  std::string kind = "five_class", synth_out;
  std::uint64_t synth_seed = 1;
  vax::synthetic::RandomSpec spec;
  std::size_t groups = 3, per_group = 50;
  double separation = 8.0;
  synth_cmd->add_option("--kind", kind, "five_class | random | blobs")->default_val("five_class");
  synth_cmd->add_option("--seed", synth_seed)->default_val(1);
  synth_cmd->add_option("--rows", spec.rows, "random: rows")->default_val(200);
  synth_cmd->add_option("--vars", spec.vars, "random, blobs: variables")->default_val(4);
  synth_cmd->add_option("--classes", spec.classes, "random: classes")->default_val(3);
  synth_cmd->add_option("--groups", groups, "blobs: groups")->default_val(3);
  synth_cmd->add_option("--per-group", per_group, "rows per class (five_class: 100, blobs: 50)");
  synth_cmd->add_option("--separation", separation, "blobs: center spacing")->default_val(8.0);
  synth_cmd->add_option("--out", synth_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*run_cmd) {
      if (trees != "auto") config.trees = parse_list<std::size_t>(trees, "--trees").at(0);
      if (!tree_schedule.empty()) config.tree_schedule = parse_list<std::size_t>(tree_schedule, "--tree-schedule");
      if (lambda != "auto") config.lambda = parse_list<double>(lambda, "--lambda").at(0);
      if (!lambda_grid.empty()) config.lambda_grid = parse_list<double>(lambda_grid, "--lambda-grid");
      if (config.lambda && !(*config.lambda >= 0.0 && *config.lambda <= 1.0))
        throw vax::InputError("--lambda must lie in [0, 1]");
      if (stress == "weighted") {
        config.stress_reference = vax::StressReference::kWeighted;
      } else if (stress == "original") {
        config.stress_reference = vax::StressReference::kOriginal;
      } else {
        throw vax::InputError("--stress-reference must be weighted or original");
      }
      const auto parsed_order = vax::parse_row_order(order);
      if (!parsed_order) throw vax::InputError("unknown --order '" + order + "'");
      config.order = *parsed_order;
      config.ingest.id_column = id_column;
      config.ingest.discretize_bins = discretize;
      config.ingest.class_order = split(class_order);
      config.histogram_bins = bins;
      config.embed = !no_embed;

      const vax::RunResult r = vax::run(config);
      const auto& m = r.manifest;
      std::printf("rows %zu (dropped %zu missing, %zu ambiguous), variables %zu, classes %zu\n", m.n_rows,
                  m.dropped_missing, m.dropped_ambiguous, m.n_vars, m.classes.size());
      std::printf("trees %zu%s: %zu raw patterns -> %zu selected, %zu aggregated, %zu discarded\n", m.trees,
                  m.trees_auto ? " (auto)" : "", m.raw_patterns, m.selected, m.aggregated, m.discarded);
      std::printf("coverage %.4f\n", m.coverage);
      if (r.map)
        std::printf("lambda %.2f%s: stress %.4f, inverted silhouette %.4f\n", r.map->lambda,
                    m.lambda_auto ? " (auto)" : "", r.map->stress, r.map->silhouette_inverted);
      std::printf("artifacts in %s\n", config.output.string().c_str());
      return 0;
    }
    if (*explain_cmd) {
      const vax::ArtifactSet set = vax::load_artifacts(artifacts_dir);
      const auto ids = split(instances);
      const vax::InstanceExplanation found = vax::explain_instances(set, ids);
      vax::Json per_instance = vax::Json::array();
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& k = found.pattern_of[i];
        per_instance.push_back({{"instance_id", ids[i]},
                                {"pattern_id", k ? vax::Json(set.jeps.patterns[*k].id) : vax::Json(nullptr)}});
      }
      const vax::JepSet chosen = vax::subset(set.jeps, found.patterns);
      vax::Json out = {{"instances", std::move(per_instance)},
                       {"unsupported", found.unsupported},
                       {"patterns", vax::patterns_json(chosen, set.dataset)}};
      std::cout << vax::dump(out);
      return 0;
    }
    if (*serve_cmd) {
      if (!ui_dir.empty()) server_options.ui_directory = ui_dir;
      vax::Server server(vax::Service(vax::Session::load(serve_dir)), server_options);
      const int port = server.bind();
      std::fprintf(stderr, "serving %s on http://%s:%d\n", serve_dir.c_str(), server_options.host.c_str(), port);
      active_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.serve();
      active_server = nullptr;
      return 0;
    }
    if (*synth_cmd) {
      vax::Dataset d = [&] {
        if (kind == "five_class") return vax::synthetic::five_class(synth_seed, synth_cmd->count("--per-group") ? per_group : 100);
        if (kind == "random") return vax::synthetic::random(synth_seed, spec);
        if (kind == "blobs") return vax::synthetic::blobs(synth_seed, groups, per_group, spec.vars, separation);
        throw vax::InputError("unknown --kind '" + kind + "'");
      }();
      const std::string csv = vax::to_canonical_csv(d);
      if (synth_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(synth_out, std::ios::binary);
        out << csv;
        if (!out) throw vax::InputError("cannot write " + synth_out);
      }
      return 0;
    }
  } catch (const vax::InputError& e) {
    std::fprintf(stderr, "vax: input error: %s\n", e.what());
    return kExitInput;
  } catch (const vax::ConsistencyError& e) {
    std::fprintf(stderr, "vax: consistency failure: %s\n", e.what());
    return kExitConsistency;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vax: %s\n", e.what());
    return 1;
  }
  return 0;
}
