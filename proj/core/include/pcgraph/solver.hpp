#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pcgraph/graph.hpp"
#include "pcgraph/suff_stats.hpp"

namespace pcgraph {

/// Stopping rule and numerical guards for the per-node square-root Lasso.
struct SolverConfig {
  /// Stop once a full sweep lowers the objective by less than this fraction.
  double tol = 1e-9;
  int max_sweeps = 1000;
  /// The residual-norm term of the objective is clamped below at
  /// max(residual_floor, 1e-6 * ||x_i||). Radicands computed from the
  /// statistics carry rounding noise of order eps * ||x_i||^2, so smaller
  /// residual norms are indistinguishable from an exact fit.
  double residual_floor = 0.0;

  /// Throws InvalidArgument on tol <= 0, max_sweeps < 1 or a negative floor.
  void validate() const;
};

/// Global minimiser of h(w) = sqrt(a w^2 - 2 b w + c) + lambda |w|.
///
/// Writing the radicand as a (w - b/a)^2 + e with e = c - b^2/a, the
/// derivative of the root at zero is -b / sqrt(c), so w = 0 is optimal iff
/// b^2 <= lambda^2 c. Otherwise the stationarity condition on the branch
/// sign(w) = sign(b) gives
///
///   w = b/a - sign(b) * lambda * sqrt(e / (a (a - lambda^2)))
///
/// and b^2 > lambda^2 c >= lambda^2 b^2 / a forces lambda^2 < a. Ties at zero
/// (lambda^2 >= a with e = 0) resolve to 0.
///
/// Throws InvalidQuadratic if a <= 0, lambda < 0 or e < -1e-12 (relative to
/// max(|c|, 1)).
double coordinate_update(double a, double b, double c, double lambda);

/// Penalty weights ||x_j|| / sqrt(N) for the regressors of node i, in the
/// order of other_nodes(P, i). Zero when N = 0.
Vector penalty_weights(const SuffStats& stats, Index node);

/// ||x_i - X_{-i} w|| + sum_j lambda_j |w_j| evaluated from the statistics.
/// The radicand is clamped at zero before the root. `w` has length P - 1.
double sqrt_lasso_objective(const SuffStats& stats, Index node,
                            const Eigen::Ref<const Vector>& w);

struct Certificate {
  /// Largest violation of the zero-subgradient condition over coordinates,
  /// measured against the per-coordinate tolerance (<= 0 means it holds).
  double max_violation = 0.0;
  double residual_norm = 0.0;
  bool holds = true;
};

/// Subgradient optimality check at w for the floor-clamped objective. For
/// w_j != 0 the smooth gradient plus lambda_j sign(w_j) must vanish to
/// 1e-6 lambda_j + 1e-9 (only checked while the residual is above the floor);
/// for w_j = 0 the smooth gradient must lie within lambda_j (1 + 1e-6). Below
/// the floor the residual term is flat and its gradient is zero. Pinned
/// zero-norm columns are skipped.
Certificate optimality_certificate(const SuffStats& stats, Index node,
                                   const Eigen::Ref<const Vector>& w,
                                   const SolverConfig& cfg = {});

struct NodeSolveState {
  Index node = 0;
  /// Regressor weights in the order of other_nodes(P, node).
  Vector weights;
  /// Objective with the floor-clamped residual term. Equals
  /// sqrt_lasso_objective whenever the residual is above the floor.
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
  /// Largest relative objective increase seen between consecutive sweeps.
  /// Zero for a monotone run; rounding may leave it at machine precision.
  double max_increase = 0.0;
};

/// Cyclic coordinate descent on the weighted square-root Lasso for one node.
/// Starts from `warm` (or zero) and visits coordinates in `order` (positions
/// into other_nodes(P, node); empty means natural order). Costs O(P) per
/// coordinate update and O(P^2) per sweep.
NodeSolveState spice_solve_node(const SuffStats& stats, Index node,
                                const SolverConfig& cfg,
                                const std::optional<Vector>& warm = std::nullopt,
                                std::span<const Index> order = {});

struct LearnResult {
  WeightedGraph graph;
  std::vector<NodeSolveState> nodes;
};

/// Solves every node independently (parallel over nodes) and assembles the
/// rows of the learned adjacency matrix.
LearnResult spice_learn(const SuffStats& stats, const SolverConfig& cfg,
                        int threads = 1);

WeightedGraph spice_learn_graph(const Dataset& data, const SolverConfig& cfg,
                                int threads = 1);

/// Places per-node weight vectors into the rows of a P x P graph.
WeightedGraph assemble_graph(std::span<const NodeSolveState> nodes,
                             Index node_count);

/// Streaming learner. Each snapshot is folded into the statistics in O(P^2)
/// and every node is re-solved from its previous weights, so the cost of an
/// update does not depend on how many snapshots were seen.
class OnlineSpice {
 public:
  OnlineSpice(Index nodes, SolverConfig cfg, int threads = 1);

  /// Throws DimensionMismatch for a wrong-length snapshot.
  void update(const Eigen::Ref<const Vector>& x);

  Index nodes() const noexcept { return stats_.nodes(); }
  Index samples_count() const noexcept { return stats_.samples_count(); }
  const SuffStats& stats() const noexcept { return stats_; }
  const std::vector<NodeSolveState>& states() const noexcept { return states_; }
  WeightedGraph graph() const;

 private:
  SolverConfig cfg_;
  int threads_;
  SuffStats stats_;
  std::vector<NodeSolveState> states_;
};

/// (X_{-i}^T X_{-i} + sigma2 diag(pi)^-1)^-1 X_{-i}^T x_i from the statistics.
/// `pi` has length P - 1. Throws SingularSystem when the regularised Gram
/// cannot be factorised, InvalidArgument for non-positive pi or negative
/// sigma2.
Vector ridge_estimate(const SuffStats& stats, Index node,
                      const Eigen::Ref<const Vector>& pi, double sigma2);

}  // namespace pcgraph
