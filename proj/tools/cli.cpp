#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pcgraph/baselines.hpp"
#include "pcgraph/evaluation.hpp"
#include "pcgraph/experiment.hpp"
#include "pcgraph/ground_truth.hpp"
#include "pcgraph/io.hpp"
#include "pcgraph/parallel.hpp"
#include "pcgraph/solver.hpp"

namespace pcgraph::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string data;
  std::string out;
  std::string method = "spice";
  std::string split;
  std::string graph;
  std::string graph_spec;
  std::string graph_out;
  std::string truth_out;
  std::string coords;
  std::string features;
  std::string config;
  std::string json_out;
  std::string diagnostics;
  std::string center_mode;
  std::vector<Index> checkpoints;
  std::uint64_t seed = 0;
  Index samples = 20000;
  int threads = 0;
  double tol = SolverConfig{}.tol;
  int max_sweeps = SolverConfig{}.max_sweeps;
  bool center = false;
};

class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_input(const std::string& path, const char* flag) {
  if (path.empty()) return;
  if (!fs::is_regular_file(path)) {
    throw DataError(std::string("input file '") + path + "' (" + flag + ") does not exist");
  }
}

void require_output(const std::string& path, const char* flag) {
  if (path.empty() || path == "-") return;
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw DataError(std::string("output directory '") + parent.string() + "' (" + flag +
                    ") does not exist");
  }
}

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  return f;
}

/// Writes through `out` when path is empty or "-", otherwise to the file.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  auto f = open_file(path);
  fn(f);
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.tol = o.tol;
  cfg.max_sweeps = o.max_sweeps;
  cfg.validate();
  return cfg;
}

void write_spice_diagnostics(const std::string& path, const SuffStats& stats,
                             const std::vector<NodeSolveState>& nodes,
                             const SolverConfig& cfg) {
  if (path.empty()) return;
  auto f = open_file(path);
  for (const auto& s : nodes) {
    f << io::node_diagnostics_json(s, optimality_certificate(stats, s.node, s.weights, cfg))
      << '\n';
  }
}

int cmd_synth(const Options& o, std::ostream& out) {
  require_input(o.graph_spec, "--graph-spec");
  require_output(o.out, "--out");
  require_output(o.graph_out, "--graph-out");
  require_output(o.truth_out, "--truth-out");
  const CommunitySpec spec =
      o.graph_spec.empty() ? CommunitySpec{} : io::read_community_spec(o.graph_spec);
  const auto model = build_synthetic_model(spec);
  const auto data = generate_synthetic(model.generator, model.noise, o.samples, o.seed);
  emit(o.out, out, [&](std::ostream& s) { io::write_matrix(s, data.samples()); });
  if (!o.graph_out.empty()) io::write_graph(o.graph_out, model.generator);
  if (!o.truth_out.empty()) io::write_graph(o.truth_out, model.truth);
  return kExitOk;
}

int cmd_learn(const Options& o, std::ostream& out) {
  require_input(o.data, "--data");
  require_output(o.out, "--out");
  require_output(o.diagnostics, "--diagnostics");
  Dataset data = io::read_dataset(o.data);
  if (o.center) {
    Matrix x = data.samples();
    const Vector mean = x.colwise().mean().transpose();
    x.rowwise() -= mean.transpose();
    data = Dataset(std::move(x), mean);
  }
  const auto stats = SuffStats::from_dataset(data);
  std::optional<WeightedGraph> graph;
  if (o.method == "spice") {
    const auto cfg = solver_config(o);
    auto result = spice_learn(stats, cfg, resolve_threads(o.threads));
    write_spice_diagnostics(o.diagnostics, stats, result.nodes, cfg);
    graph = std::move(result.graph);
  } else {
    auto result = ls_learn(stats);
    if (!o.diagnostics.empty()) {
      auto f = open_file(o.diagnostics);
      for (const auto& r : result.rows) {
        f << "{\"node\":" << r.node + 1 << ",\"rank\":" << r.rank
          << ",\"singular\":" << (r.singular ? "true" : "false") << "}\n";
      }
    }
    graph = std::move(result.graph);
  }
  if (o.out.empty() || o.out == "-") {
    io::write_graph_dense(out, *graph);
  } else {
    io::write_graph(o.out, *graph);
  }
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  require_input(o.graph, "--graph");
  require_input(o.data, "--data");
  require_input(o.split, "--split");
  require_output(o.out, "--out");
  const auto graph = io::read_graph(fs::path(o.graph));
  const auto split = io::read_split(o.split, graph.nodes());
  const auto observed = io::read_table(fs::path(o.data)).values;
  if (observed.cols() != static_cast<Index>(split.observed().size())) {
    throw DataError("'" + o.data + "' has " + std::to_string(observed.cols()) +
                    " columns but split '" + o.split + "' lists " +
                    std::to_string(split.observed().size()) + " observed nodes");
  }
  const Matrix predicted = predict(graph, observed, split);
  std::vector<std::string> header;
  for (Index t : split.targets()) header.push_back("node" + std::to_string(t + 1));
  emit(o.out, out, [&](std::ostream& s) { io::write_matrix(s, predicted, header); });
  return kExitOk;
}

int cmd_refgraph(const Options& o, std::ostream& out) {
  require_input(o.coords, "--coords");
  require_input(o.features, "--features");
  require_output(o.out, "--out");
  const auto graph = !o.coords.empty() ? geodesic_graph(io::read_coordinates(o.coords))
                                       : diffusion_graph(io::read_features(o.features));
  if (o.out.empty() || o.out == "-") {
    io::write_graph_dense(out, graph);
  } else {
    io::write_graph(o.out, graph);
  }
  return kExitOk;
}

int cmd_eval(const Options& o, const CLI::App& app, std::ostream& out) {
  require_input(o.config, "--config");
  require_output(o.out, "--out");
  require_output(o.json_out, "--json");
  auto loaded = io::read_experiment(o.config);
  auto& cfg = loaded.config;
  if (app.count("--seed")) cfg.seed = o.seed;
  if (app.count("--threads")) cfg.threads = o.threads;
  if (app.count("--tol")) cfg.solver.tol = o.tol;
  if (app.count("--max-sweeps")) cfg.solver.max_sweeps = o.max_sweeps;
  if (!o.center_mode.empty()) {
    cfg.center_mode = o.center_mode == "each" ? CenterMode::Each : CenterMode::Train;
  }
  const auto report = run_experiment(cfg, loaded.source);
  emit(o.out, out, [&](std::ostream& s) { io::write_report_csv(s, report); });
  if (!o.json_out.empty()) {
    auto f = open_file(o.json_out);
    io::write_report_json(f, report, loaded.config_json);
  }
  return kExitOk;
}

fs::path checkpoint_path(const std::string& out, Index n) {
  fs::path p(out);
  const auto ext = p.extension();
  p.replace_extension();
  p += ".N" + std::to_string(n);
  p += ext.empty() ? fs::path(".csv") : ext;
  return p;
}

int cmd_stream(const Options& o, std::ostream& out) {
  require_input(o.data, "--data");
  require_output(o.out, "--out");
  require_output(o.diagnostics, "--diagnostics");
  if (!o.checkpoints.empty() && (o.out.empty() || o.out == "-")) {
    throw DataError("--checkpoints needs --out to name the checkpoint files");
  }
  const auto data = io::read_dataset(o.data);
  const auto cfg = solver_config(o);
  OnlineSpice learner(data.nodes(), cfg, resolve_threads(o.threads));
  auto pending = o.checkpoints;
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;
  for (Index r = 0; r < data.samples_count(); ++r) {
    learner.update(data.samples().row(r).transpose());
    while (next < pending.size() && pending[next] == learner.samples_count()) {
      io::write_graph(checkpoint_path(o.out, pending[next]), learner.graph());
      ++next;
    }
  }
  if (next < pending.size()) {
    throw DataError("checkpoint N=" + std::to_string(pending[next]) + " exceeds the " +
                    std::to_string(data.samples_count()) + " rows of '" + o.data + "'");
  }
  write_spice_diagnostics(o.diagnostics, learner.stats(), learner.states(), cfg);
  if (o.out.empty() || o.out == "-") {
    io::write_graph_dense(out, learner.graph());
  } else {
    io::write_graph(o.out, learner.graph());
  }
  return kExitOk;
}

void add_solver_flags(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Relative objective decrease that ends the sweeps")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-sweeps", o.max_sweeps, "Cap on coordinate sweeps per node")
      ->check(CLI::PositiveNumber);
  sub->add_option("--threads", o.threads, "Worker threads (default: PCGRAPH_THREADS or all cores)");
  sub->add_option("--diagnostics", o.diagnostics, "Write per-node solver diagnostics as JSON lines");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse partial-correlation graph learning and graph-based prediction",
               "pcgraph"};
  app.require_subcommand(1, 1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Generate a community graph and a synthetic dataset");
  synth->add_option("--graph-spec", o.graph_spec, "Community model JSON (default model if omitted)");
  synth->add_option("--n", o.samples, "Number of snapshots")->check(CLI::PositiveNumber);
  synth->add_option("--seed", o.seed, "Seed for the innovations");
  synth->add_option("--out", o.out, "Dataset CSV (default: stdout)");
  synth->add_option("--graph-out", o.graph_out, "Write the generating matrix W");
  synth->add_option("--truth-out", o.truth_out, "Write the partial-correlation graph of the model");

  auto* learn = app.add_subcommand("learn", "Learn a graph from a dataset");
  learn->add_option("--data", o.data, "Dataset CSV")->required();
  learn->add_option("--out", o.out, "Graph CSV (default: stdout)");
  learn->add_option("--method", o.method, "spice or ls")
      ->check(CLI::IsMember({"spice", "ls"}));
  learn->add_flag("--center", o.center, "Subtract column means before learning");
  learn->add_option("--seed", o.seed, "Accepted for uniformity; learning is deterministic");
  add_solver_flags(learn, o);

  auto* pred = app.add_subcommand("predict", "Predict target nodes from observed ones");
  pred->add_option("--graph", o.graph, "Graph CSV (dense or edge list)")->required();
  pred->add_option("--data", o.data, "Observed values CSV, one column per observed node")->required();
  pred->add_option("--split", o.split, "Split JSON {\"observed\": [...], \"targets\": [...]}")->required();
  pred->add_option("--out", o.out, "Predictions CSV (default: stdout)");

  auto* ref = app.add_subcommand("refgraph", "Build a distance-kernel reference graph");
  auto* coords = ref->add_option("--coords", o.coords, "CSV name,lat,lon");
  auto* feats = ref->add_option("--features", o.features, "CSV with one feature vector per node");
  coords->excludes(feats);
  ref->add_option("--out", o.out, "Graph CSV (default: stdout)");
  ref->callback([&] {
    if (o.coords.empty() && o.features.empty()) {
      throw CLI::ValidationError("refgraph", "one of --coords or --features is required");
    }
  });

  auto* eval = app.add_subcommand("eval", "Run a Monte Carlo learning-curve experiment");
  eval->add_option("--config", o.config, "Experiment JSON")->required();
  eval->add_option("--out", o.out, "Report CSV (default: stdout)");
  eval->add_option("--json", o.json_out, "Also write the report as JSON");
  eval->add_option("--seed", o.seed, "Override the config seed");
  eval->add_option("--center-mode", o.center_mode, "train or each")
      ->check(CLI::IsMember({"train", "each"}));
  add_solver_flags(eval, o);

  auto* stream = app.add_subcommand("stream", "Replay a dataset through the online learner");
  stream->add_option("--data", o.data, "Dataset CSV")->required();
  stream->add_option("--out", o.out, "Final graph CSV (default: stdout)");
  stream->add_option("--checkpoints", o.checkpoints, "Sample counts at which to write graphs")
      ->delimiter(',');
  stream->add_option("--seed", o.seed, "Accepted for uniformity; streaming is deterministic");
  add_solver_flags(stream, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pcgraph: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    }
    return kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(o, out);
    if (*learn) return cmd_learn(o, out);
    if (*pred) return cmd_predict(o, out);
    if (*ref) return cmd_refgraph(o, out);
    if (*eval) return cmd_eval(o, *eval, out);
    if (*stream) return cmd_stream(o, out);
  } catch (const Error& e) {
    err << "pcgraph: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    err << "pcgraph: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "pcgraph: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pcgraph::cli
