#pragma once

#include <vector>

#include "pcgraph/graph.hpp"

namespace pcgraph {

/// Sufficient statistics of a data matrix X (N x P) for every per-node
/// regression: the full Gram matrix X^T X and the sample count.
///
/// The per-node quantities are views into the shared Gram:
///   G_{-i}   = gram_without(i)   (X_{-i}^T X_{-i})
///   rho_i    = cross(i)          (X_{-i}^T x_i)
///   kappa_i  = target_energy(i)  (||x_i||^2)
/// Memory is O(P^2); a new snapshot costs O(P^2).
class SuffStats {
 public:
  static SuffStats zeros(Index nodes);
  static SuffStats from_dataset(const Dataset& data);

  Index nodes() const noexcept { return gram_.rows(); }
  Index samples_count() const noexcept { return count_; }
  const Matrix& gram() const noexcept { return gram_; }

  double target_energy(Index i) const { return gram_(i, i); }
  double column_norm_sq(Index j) const { return gram_(j, j); }
  Vector cross(Index i) const;
  Matrix gram_without(Index i) const;

  /// Accumulates one snapshot in place. Throws DimensionMismatch or
  /// NonFinite.
  void add_sample(const Eigen::Ref<const Vector>& x);

 private:
  SuffStats(Matrix gram, Index count) : gram_(std::move(gram)), count_(count) {}

  Matrix gram_;
  Index count_ = 0;
};

/// Value-returning form of SuffStats::add_sample.
SuffStats suffstats_rank_one_update(SuffStats stats,
                                    const Eigen::Ref<const Vector>& x);

/// Indices 0..nodes-1 with `skip` removed.
std::vector<Index> other_nodes(Index nodes, Index skip);

}  // namespace pcgraph
