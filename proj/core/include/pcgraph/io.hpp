#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcgraph/baselines.hpp"
#include "pcgraph/experiment.hpp"
#include "pcgraph/graph.hpp"
#include "pcgraph/ground_truth.hpp"

namespace pcgraph::io {

// File formats. Node indices are 1-based in every file.
//
//   dataset     CSV, one snapshot per row, P numeric columns. An optional
//               first row with any non-numeric field is treated as a header.
//   graph       dense CSV (P rows of P weights, row i = links into node i), or
//               an edge list with header `i,j,w_ij` and one `i,j,w` row per
//               link. The reader accepts either; the writer emits the dense
//               file and an edge list next to it (see edge_list_path).
//   coords      CSV `name,lat,lon` (degrees), optional header.
//   features    CSV, one row per node, L numeric columns.
//   split       JSON {"observed": [...], "targets": [...]}.
//   graph spec  JSON community model, see parse_community_spec.
//
// Numbers are written in shortest round-trip form, so reading a written file
// reproduces every double exactly.

std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  Matrix values;
};

/// Numeric CSV with optional header. Blank lines and lines starting with '#'
/// are skipped. Throws Parse (with line number) or Io.
Table read_table(std::istream& in, const std::string& source = "<stream>");
Table read_table(const std::filesystem::path& path);

Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   const std::vector<std::string>& header = {});
void write_matrix(std::ostream& out, const Matrix& values,
                  const std::vector<std::string>& header = {});

WeightedGraph read_graph(std::istream& in, const std::string& source = "<stream>");
WeightedGraph read_graph(const std::filesystem::path& path);
void write_graph_dense(std::ostream& out, const WeightedGraph& graph);
/// Edge list of the nonzero off-diagonal weights. The last row is always
/// `P,P,0` so the node count survives trailing isolated nodes.
void write_graph_edges(std::ostream& out, const WeightedGraph& graph);
/// Writes the dense form to `path` and the edge list to edge_list_path(path).
void write_graph(const std::filesystem::path& path, const WeightedGraph& graph);
std::filesystem::path edge_list_path(const std::filesystem::path& path);

GeoCoordinates read_coordinates(const std::filesystem::path& path);
FeatureVectors read_features(const std::filesystem::path& path);

NodeSplit parse_split(const std::string& json_text, Index nodes,
                      const std::string& source = "<split>");
NodeSplit read_split(const std::filesystem::path& path, Index nodes);
std::string split_to_json(const NodeSplit& split);

/// Community model JSON. All keys optional:
///   {"blocks": [5, 5], "weight_min": 0.2, "weight_max": 0.6,
///    "inter_edges": 2, "bidirectional": false, "variance_max": 1.0,
///    "seed": 1, "max_retries": 1000}
CommunitySpec parse_community_spec(const std::string& json_text,
                                   const std::string& source = "<graph spec>");
CommunitySpec read_community_spec(const std::filesystem::path& path);

struct LoadedExperiment {
  ExperimentConfig config;
  ExperimentSource source;
  /// The parsed configuration, re-serialised, for report echoes.
  std::string config_json;
};

/// Experiment configuration JSON; relative paths resolve against
/// `base_dir`. See configs/ and the README for the schema.
LoadedExperiment parse_experiment(const std::string& json_text,
                                  const std::filesystem::path& base_dir,
                                  const std::string& source = "<config>");
LoadedExperiment read_experiment(const std::filesystem::path& path);

/// `method,N,npe,npe_db,npe_se,nmse,nmse_raw,nnz,wall_ms`
void write_report_csv(std::ostream& out, const EvalReport& report);
/// {"config": <echo>, "rows": [...]} with every ReportRow field.
void write_report_json(std::ostream& out, const EvalReport& report,
                       const std::string& config_json);

/// One JSON object (no trailing newline) describing a node solve.
std::string node_diagnostics_json(const NodeSolveState& state,
                                  const Certificate& certificate);

}  // namespace pcgraph::io
