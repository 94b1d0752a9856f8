#include "pcgraph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace pcgraph {
namespace {

void check_split(const WeightedGraph& w, const NodeSplit& split) {
  if (split.nodes() != w.nodes()) {
    throw Error(ErrorCode::DimensionMismatch,
                "split covers " + std::to_string(split.nodes()) +
                    " nodes but the graph has " + std::to_string(w.nodes()));
  }
}

}  // namespace

Vector predict(const WeightedGraph& w, const Vector& observed,
               const NodeSplit& split) {
  check_split(w, split);
  if (observed.size() != static_cast<Index>(split.observed().size())) {
    throw Error(ErrorCode::DimensionMismatch,
                "got " + std::to_string(observed.size()) +
                    " observed values for " +
                    std::to_string(split.observed().size()) + " observed nodes");
  }
  return w.weights()(split.targets(), split.observed()) * observed;
}

Matrix predict(const WeightedGraph& w, const Matrix& observed,
               const NodeSplit& split) {
  check_split(w, split);
  if (observed.cols() != static_cast<Index>(split.observed().size())) {
    throw Error(ErrorCode::DimensionMismatch,
                "observed data has " + std::to_string(observed.cols()) +
                    " columns for " + std::to_string(split.observed().size()) +
                    " observed nodes");
  }
  return observed * w.weights()(split.targets(), split.observed()).transpose();
}

double to_db(double linear) {
  if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear);
}

Npe npe(const Matrix& predictions, const Matrix& truths) {
  if (predictions.rows() != truths.rows() || predictions.cols() != truths.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "prediction and truth matrices differ in shape");
  }
  const double energy = truths.squaredNorm();
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::ZeroTargetEnergy, "test targets have zero energy");
  }
  Npe out;
  out.linear = (truths - predictions).squaredNorm() / energy;
  out.db = to_db(out.linear);
  return out;
}

double frobenius_error(const WeightedGraph& truth, const WeightedGraph& estimate) {
  if (truth.nodes() != estimate.nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "graphs differ in node count");
  }
  return (truth.weights() - estimate.weights()).squaredNorm();
}

double nmse_graph(const WeightedGraph& truth, const WeightedGraph& estimate) {
  const double raw = frobenius_error(truth, estimate);
  const double norm = truth.weights().squaredNorm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::ZeroTrueGraph, "true graph has no edges");
  }
  return raw / norm;
}

double support_recovery(const WeightedGraph& truth,
                        const WeightedGraph& estimate, double zero_tol) {
  if (truth.nodes() != estimate.nodes()) {
    throw Error(ErrorCode::DimensionMismatch, "graphs differ in node count");
  }
  const Index p = truth.nodes();
  std::vector<Index> order;
  Index support = 0;
  for (Index k = 0; k < p * p; ++k) {
    const Index i = k % p;
    const Index j = k / p;
    if (i == j) continue;
    order.push_back(k);
    if (std::abs(truth(i, j)) > zero_tol) ++support;
  }
  if (support == 0) {
    throw Error(ErrorCode::ZeroTrueGraph, "true graph has no edges");
  }
  const Matrix& est = estimate.weights();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(est(a % p, a / p)) > std::abs(est(b % p, b / p));
  });
  Index hits = 0;
  for (Index r = 0; r < support; ++r) {
    const Index k = order[static_cast<std::size_t>(r)];
    if (std::abs(truth(k % p, k / p)) > zero_tol) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(support);
}

std::pair<Dataset, Dataset> center_split(const Dataset& data,
                                         std::array<double, 2> fractions,
                                         std::uint64_t seed, CenterMode mode) {
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "split fractions must lie in (0, 1)");
    }
  }
  if (std::abs(fractions[0] + fractions[1] - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "split fractions must sum to 1");
  }
  const Index n = data.samples_count();
  const auto n_train = static_cast<Index>(std::llround(fractions[0] * static_cast<double>(n)));
  const Index n_test = n - n_train;
  if (n_train < 1 || n_test < 1) {
    throw Error(ErrorCode::EmptyPartition,
                "splitting " + std::to_string(n) + " rows leaves an empty partition");
  }

  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::mt19937_64 engine(seed);
  std::shuffle(rows.begin(), rows.end(), engine);
  const std::vector<Index> train_rows(rows.begin(), rows.begin() + n_train);
  const std::vector<Index> test_rows(rows.begin() + n_train, rows.end());

  const auto cols = Eigen::all;
  Matrix train = data.samples()(train_rows, cols);
  Matrix test = data.samples()(test_rows, cols);
  const Vector train_mean = train.colwise().mean().transpose();
  const Vector test_mean =
      mode == CenterMode::Train ? train_mean : Vector(test.colwise().mean().transpose());
  train.rowwise() -= train_mean.transpose();
  test.rowwise() -= test_mean.transpose();
  return {Dataset(std::move(train), data.center() + train_mean),
          Dataset(std::move(test), data.center() + test_mean)};
}

}  // namespace pcgraph
