#include "pcgraph/graph.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace pcgraph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::SingularModel: return "SingularModel";
    case ErrorCode::UnstableGraph: return "UnstableGraph";
    case ErrorCode::InvalidQuadratic: return "InvalidQuadratic";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::ZeroTargetEnergy: return "ZeroTargetEnergy";
    case ErrorCode::ZeroTrueGraph: return "ZeroTrueGraph";
    case ErrorCode::EmptyPartition: return "EmptyPartition";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

std::optional<GraphIssue> validate_graph(const Matrix& weights) {
  if (weights.rows() != weights.cols()) {
    return GraphIssue{ErrorCode::DimensionMismatch};
  }
  if (weights.rows() < 2) {
    return GraphIssue{ErrorCode::TooFewNodes};
  }
  for (Index j = 0; j < weights.cols(); ++j) {
    for (Index i = 0; i < weights.rows(); ++i) {
      if (!std::isfinite(weights(i, j))) {
        return GraphIssue{ErrorCode::NonFinite, i, j};
      }
    }
  }
  for (Index i = 0; i < weights.rows(); ++i) {
    if (weights(i, i) != 0.0) {
      return GraphIssue{ErrorCode::NonZeroDiagonal, i, i};
    }
  }
  return std::nullopt;
}

WeightedGraph::WeightedGraph(Matrix weights) : weights_(std::move(weights)) {
  if (auto issue = validate_graph(weights_)) {
    std::string msg = "invalid graph: " + std::string(to_string(issue->code));
    if (issue->row >= 0) {
      msg += " at (" + std::to_string(issue->row + 1) + ", " +
             std::to_string(issue->col + 1) + ")";
    }
    throw Error(issue->code, msg);
  }
}

WeightedGraph WeightedGraph::zeros(Index nodes) {
  return WeightedGraph(Matrix::Zero(nodes, nodes));
}

Index WeightedGraph::edge_count(double threshold) const {
  Index count = 0;
  for (Index j = 0; j < weights_.cols(); ++j) {
    for (Index i = 0; i < weights_.rows(); ++i) {
      if (i != j && std::abs(weights_(i, j)) > threshold) ++count;
    }
  }
  return count;
}

Dataset::Dataset(Matrix samples)
    : Dataset(std::move(samples), Vector()) {}

Dataset::Dataset(Matrix samples, Vector center)
    : samples_(std::move(samples)), center_(std::move(center)) {
  if (center_.size() == 0) center_ = Vector::Zero(samples_.cols());
  if (center_.size() != samples_.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dataset center has length " + std::to_string(center_.size()) +
                    ", expected " + std::to_string(samples_.cols()));
  }
  if (!samples_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "dataset contains non-finite samples");
  }
  if (!center_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "dataset center is not finite");
  }
}

Dataset Dataset::head(Index n) const {
  if (n < 0 || n > samples_.rows()) {
    throw Error(ErrorCode::InvalidArgument,
                "requested " + std::to_string(n) + " rows from a dataset of " +
                    std::to_string(samples_.rows()));
  }
  return Dataset(samples_.topRows(n), center_);
}

NodeSplit::NodeSplit(std::vector<Index> observed, std::vector<Index> targets,
                     Index nodes)
    : observed_(std::move(observed)), targets_(std::move(targets)),
      nodes_(nodes) {
  if (observed_.empty() || targets_.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "node split needs nonempty observed and target sets");
  }
  std::unordered_set<Index> seen;
  auto check = [&](const std::vector<Index>& set, const char* name) {
    for (Index v : set) {
      if (v < 0 || v >= nodes_) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(name) + " node " + std::to_string(v + 1) +
                        " is outside 1.." + std::to_string(nodes_));
      }
      if (!seen.insert(v).second) {
        throw Error(ErrorCode::InvalidArgument,
                    "node " + std::to_string(v + 1) +
                        " appears more than once in the split");
      }
    }
  };
  check(observed_, "observed");
  check(targets_, "target");
}

}  // namespace pcgraph
