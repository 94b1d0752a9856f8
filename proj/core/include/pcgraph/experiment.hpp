#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcgraph/evaluation.hpp"
#include "pcgraph/ground_truth.hpp"
#include "pcgraph/solver.hpp"

namespace pcgraph {

enum class MethodKind {
  Spice,
  Ls,
  /// A fixed graph supplied by the user (geodesic, diffusion, published).
  Reference,
  /// The ground-truth graph of the data source.
  Truth,
};

struct MethodSpec {
  MethodKind kind = MethodKind::Spice;
  std::string name;
  /// Reference graphs, or a truth graph overriding the source's own.
  std::optional<WeightedGraph> graph;

  static MethodSpec spice() { return {MethodKind::Spice, "spice", std::nullopt}; }
  static MethodSpec ls() { return {MethodKind::Ls, "ls", std::nullopt}; }
  static MethodSpec truth() { return {MethodKind::Truth, "true", std::nullopt}; }
};

/// Fresh data from a community model in every repetition.
struct SyntheticSource {
  CommunitySpec graph;
  Index samples = 20000;
};

/// A fixed dataset, re-partitioned in every repetition.
struct DatasetSource {
  Dataset data;
  std::optional<WeightedGraph> truth;
};

using ExperimentSource = std::variant<SyntheticSource, DatasetSource>;

struct ExperimentConfig {
  std::vector<MethodSpec> methods;
  std::vector<Index> n_grid;
  int repetitions = 1;
  std::array<double, 2> fractions{0.5, 0.5};
  /// Required; validate() rejects a missing split.
  std::optional<NodeSplit> split;
  std::uint64_t seed = 0;
  CenterMode center_mode = CenterMode::Train;
  SolverConfig solver;
  /// Width of the parallel map over repetitions (<= 0: resolve_threads).
  int threads = 1;

  void validate() const;
};

/// One (repetition, method, N) evaluation.
struct Measurement {
  double npe = 0.0;
  double nmse = 0.0;
  double nmse_raw = 0.0;
  double recovery = 0.0;
  double nnz = 0.0;
  double wall_ms = 0.0;
};

struct ReportRow {
  std::string method;
  Index n = 0;
  double npe = 0.0;
  double npe_db = 0.0;
  double npe_se = 0.0;
  /// NaN when the source has no ground truth.
  double nmse = 0.0;
  double nmse_se = 0.0;
  double nmse_raw = 0.0;
  double recovery = 0.0;
  double nnz = 0.0;
  double wall_ms = 0.0;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  /// measurements[rep][method][n_index]
  std::vector<std::vector<std::vector<Measurement>>> measurements;

  const ReportRow& row(const std::string& method, Index n) const;
};

/// The ground-truth graph used for synthetic sources: the partial-correlation
/// graph of the model's population covariance. This differs from the
/// generating matrix whenever the latter is nonzero.
struct SyntheticModel {
  WeightedGraph generator;
  NoiseSpec noise;
  Matrix covariance;
  WeightedGraph truth;
};

SyntheticModel build_synthetic_model(const CommunitySpec& spec);

/// Monte Carlo learning curves. Each repetition draws (or re-partitions) its
/// own data from a stream seeded by (seed, repetition), learns every method
/// on the first N training rows for every N in the grid, and predicts the
/// test partition. Repetitions run in parallel; results are reduced in
/// repetition order so reports do not depend on the thread count.
EvalReport run_experiment(const ExperimentConfig& cfg,
                          const ExperimentSource& source);

/// Seed for repetition `rep`, stream `stream` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep,
                          std::uint64_t stream);

}  // namespace pcgraph
