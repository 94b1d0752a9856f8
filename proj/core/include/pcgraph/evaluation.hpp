#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "pcgraph/graph.hpp"

namespace pcgraph {

/// x_star = W_{star,0} x_0 for one snapshot.
Vector predict(const WeightedGraph& w, const Vector& observed,
               const NodeSplit& split);

/// Row-wise prediction: `observed` is snapshots x |observed|, the result is
/// snapshots x |targets|.
Matrix predict(const WeightedGraph& w, const Matrix& observed,
               const NodeSplit& split);

struct Npe {
  double linear = 0.0;
  /// 10 log10(linear); -infinity for a perfect prediction.
  double db = 0.0;
};

double to_db(double linear);

/// Pooled normalised prediction error sum ||x - x^||^2 / sum ||x||^2.
/// Throws DimensionMismatch or ZeroTargetEnergy.
Npe npe(const Matrix& predictions, const Matrix& truths);

/// ||W - W^||_F^2.
double frobenius_error(const WeightedGraph& truth, const WeightedGraph& estimate);

/// ||W - W^||_F^2 / ||W||_F^2. Throws ZeroTrueGraph for W = 0.
double nmse_graph(const WeightedGraph& truth, const WeightedGraph& estimate);

/// Fraction of the true edges (|w_ij| > zero_tol, i != j) found among the
/// |supp(W)| largest off-diagonal magnitudes of the estimate. Ties are broken
/// by position. Throws ZeroTrueGraph for an empty support.
double support_recovery(const WeightedGraph& truth,
                        const WeightedGraph& estimate, double zero_tol = 1e-10);

enum class CenterMode { Train, Each };

/// Random row partition into (train, test) with sizes round(f0 N) and the
/// rest, then column centering. CenterMode::Train subtracts the training
/// means from both parts; CenterMode::Each uses each part's own means. The
/// subtracted means are recorded in Dataset::center. Throws EmptyPartition
/// or InvalidArgument for fractions outside (0, 1) or not summing to one.
std::pair<Dataset, Dataset> center_split(const Dataset& data,
                                         std::array<double, 2> fractions,
                                         std::uint64_t seed,
                                         CenterMode mode = CenterMode::Train);

}  // namespace pcgraph
