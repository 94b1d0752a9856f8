#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "pcgraph/error.hpp"

namespace pcgraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A failed graph invariant. Indices are 0-based.
struct GraphIssue {
  ErrorCode code;
  Index row = -1;
  Index col = -1;
};

/// Checks the weighted-adjacency invariants on a raw matrix: square, at least
/// two nodes, finite entries and an exactly zero diagonal.
std::optional<GraphIssue> validate_graph(const Matrix& weights);

/// Dense P x P adjacency matrix. Row i holds the weights of the links
/// incoming to node i, so w(i, j) is the predictive effect of node j on i.
class WeightedGraph {
 public:
  /// Throws Error if `weights` violates any invariant checked by
  /// validate_graph.
  explicit WeightedGraph(Matrix weights);

  static WeightedGraph zeros(Index nodes);

  Index nodes() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  double operator()(Index i, Index j) const { return weights_(i, j); }

  /// Number of nonzero off-diagonal entries.
  Index edge_count(double threshold = 0.0) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.weights_ == b.weights_;
  }

 private:
  Matrix weights_;
};

/// N snapshots of a P-dimensional signal, one snapshot per row. `center`
/// records the means already subtracted from the columns.
class Dataset {
 public:
  explicit Dataset(Matrix samples);
  Dataset(Matrix samples, Vector center);

  Index samples_count() const noexcept { return samples_.rows(); }
  Index nodes() const noexcept { return samples_.cols(); }
  const Matrix& samples() const noexcept { return samples_; }
  const Vector& center() const noexcept { return center_; }

  /// The first n rows, keeping the centering metadata.
  Dataset head(Index n) const;

 private:
  Matrix samples_;
  Vector center_;
};

/// Partition of node indices into observed and target sets (0-based).
class NodeSplit {
 public:
  NodeSplit(std::vector<Index> observed, std::vector<Index> targets,
            Index nodes);

  const std::vector<Index>& observed() const noexcept { return observed_; }
  const std::vector<Index>& targets() const noexcept { return targets_; }
  Index nodes() const noexcept { return nodes_; }

 private:
  std::vector<Index> observed_;
  std::vector<Index> targets_;
  Index nodes_;
};

}  // namespace pcgraph
