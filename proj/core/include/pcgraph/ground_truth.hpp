#pragma once

#include <cstdint>
#include <vector>

#include "pcgraph/graph.hpp"

namespace pcgraph {

/// Per-node innovation standard deviations (all strictly positive).
struct NoiseSpec {
  Vector sigmas;

  void validate(Index nodes) const;
};

/// Partial-correlation weights of a full-rank covariance, built literally by
/// partialling out x_{-(i,j)} from x_i and x_j for every ordered pair and
/// taking Cov[x~_i, x~_j] / Var[x~_j]. O(P^5); meant for P up to a few dozen.
/// Throws NotSPD.
WeightedGraph true_weights_from_covariance(const Matrix& cov);

/// Same weights through the precision matrix, w_ij = -Theta_ij / Theta_ii.
/// O(P^3). Throws NotSPD.
WeightedGraph weights_from_precision(const Matrix& cov);

/// Throws NotSPD unless `cov` is symmetric with a Cholesky factor and a
/// smallest eigenvalue above 1e-12 of the largest.
void require_spd(const Matrix& cov);

/// Throws SingularModel if the smallest singular value of I - W is below
/// 1e-8 of the largest.
void require_invertible_model(const WeightedGraph& w);

/// (I - W)^-1 diag(sigma^2) (I - W)^-T.
Matrix population_covariance(const WeightedGraph& w, const NoiseSpec& noise);

/// n independent draws x = (I - W)^-1 eps with eps ~ N(0, diag(sigma^2)).
/// Draws are taken snapshot by snapshot, so a smaller n with the same seed
/// yields a prefix of a larger one.
Dataset generate_synthetic(const WeightedGraph& w, const NoiseSpec& noise,
                           Index n, std::uint64_t seed);

/// Two-or-more-community random graph.
struct CommunitySpec {
  std::vector<Index> blocks{5, 5};
  /// Link magnitudes are uniform on [weight_min, weight_max] with a random
  /// sign; both bounds must lie in [0, 1).
  double weight_min = 0.2;
  double weight_max = 0.6;
  /// Directed links between distinct blocks, drawn without replacement.
  Index inter_edges = 2;
  /// false: one link per within-block node pair with a random direction.
  /// true: both directions.
  bool bidirectional = false;
  /// Innovation variances are uniform on (0, variance_max].
  double variance_max = 1.0;
  std::uint64_t seed = 1;
  int max_retries = 1000;

  Index nodes() const;
  void validate() const;
};

/// Draws a community graph whose I - W is invertible and whose spectral radius
/// is below one, resampling up to spec.max_retries times. Throws
/// UnstableGraph when the retries run out.
WeightedGraph make_community_graph(const CommunitySpec& spec);

/// Innovation scales for a community spec (independent stream of spec.seed).
NoiseSpec make_noise(const CommunitySpec& spec);

}  // namespace pcgraph
