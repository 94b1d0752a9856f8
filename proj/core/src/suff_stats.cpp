#include "pcgraph/suff_stats.hpp"

#include <string>

namespace pcgraph {

std::vector<Index> other_nodes(Index nodes, Index skip) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(nodes > 0 ? nodes - 1 : 0));
  for (Index j = 0; j < nodes; ++j) {
    if (j != skip) idx.push_back(j);
  }
  return idx;
}

SuffStats SuffStats::zeros(Index nodes) {
  return SuffStats(Matrix::Zero(nodes, nodes), 0);
}

SuffStats SuffStats::from_dataset(const Dataset& data) {
  const Matrix& x = data.samples();
  Matrix gram = Matrix::Zero(x.cols(), x.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return SuffStats(std::move(gram), x.rows());
}

Vector SuffStats::cross(Index i) const {
  return gram_(other_nodes(nodes(), i), i);
}

Matrix SuffStats::gram_without(Index i) const {
  const auto idx = other_nodes(nodes(), i);
  return gram_(idx, idx);
}

void SuffStats::add_sample(const Eigen::Ref<const Vector>& x) {
  if (x.size() != nodes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "sample has length " + std::to_string(x.size()) +
                    ", statistics track " + std::to_string(nodes()) +
                    " nodes");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::NonFinite, "sample contains non-finite values");
  }
  gram_.noalias() += x * x.transpose();
  ++count_;
}

SuffStats suffstats_rank_one_update(SuffStats stats,
                                    const Eigen::Ref<const Vector>& x) {
  stats.add_sample(x);
  return stats;
}

}  // namespace pcgraph
