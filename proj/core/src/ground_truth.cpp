#include "pcgraph/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace pcgraph {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

bool invertible(const Matrix& m) {
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s.size() > 0 && s(s.size() - 1) >= 1e-8 * s(0);
}

double spectral_radius(const Matrix& m) {
  const Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

void NoiseSpec::validate(Index nodes) const {
  if (sigmas.size() != nodes) {
    throw Error(ErrorCode::DimensionMismatch,
                "noise spec has " + std::to_string(sigmas.size()) +
                    " scales for " + std::to_string(nodes) + " nodes");
  }
  for (Index i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas(i) > 0.0) || !std::isfinite(sigmas(i))) {
      throw Error(ErrorCode::InvalidArgument,
                  "innovation scale of node " + std::to_string(i + 1) +
                      " must be positive and finite");
    }
  }
}

void require_spd(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() < 2) {
    throw Error(ErrorCode::NotSPD, "covariance must be square with P >= 2");
  }
  if (!cov.allFinite()) {
    throw Error(ErrorCode::NotSPD, "covariance has non-finite entries");
  }
  const double scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::NotSPD, "covariance is not symmetric");
  }
  if (Eigen::LLT<Matrix>(cov).info() != Eigen::Success) {
    throw Error(ErrorCode::NotSPD, "covariance has no Cholesky factor");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev(0) <= 1e-12 * ev(ev.size() - 1)) {
    throw Error(ErrorCode::NotSPD, "covariance is numerically rank deficient");
  }
}

WeightedGraph true_weights_from_covariance(const Matrix& cov) {
  require_spd(cov);
  const Index p = cov.rows();
  Matrix w = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      std::vector<Index> rest;
      for (Index k = 0; k < p; ++k) {
        if (k != i && k != j) rest.push_back(k);
      }
      double cov_ij = cov(i, j);
      double var_i = cov(i, i);
      double var_j = cov(j, j);
      if (!rest.empty()) {
        const Eigen::LLT<Matrix> llt(cov(rest, rest));
        const Vector ci = cov(rest, i);
        const Vector cj = cov(rest, j);
        const Vector proj_i = llt.solve(ci);
        const Vector proj_j = llt.solve(cj);
        cov_ij -= ci.dot(proj_j);
        var_i -= ci.dot(proj_i);
        var_j -= cj.dot(proj_j);
      }
      w(i, j) = cov_ij / var_j;
      w(j, i) = cov_ij / var_i;
    }
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph weights_from_precision(const Matrix& cov) {
  require_spd(cov);
  const Index p = cov.rows();
  const Matrix precision = Eigen::LLT<Matrix>(cov).solve(Matrix::Identity(p, p));
  Matrix w(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      w(i, j) = i == j ? 0.0 : -precision(i, j) / precision(i, i);
    }
  }
  return WeightedGraph(std::move(w));
}

void require_invertible_model(const WeightedGraph& w) {
  const Index p = w.nodes();
  if (!invertible(Matrix::Identity(p, p) - w.weights())) {
    throw Error(ErrorCode::SingularModel, "I - W is numerically singular");
  }
}

Matrix population_covariance(const WeightedGraph& w, const NoiseSpec& noise) {
  const Index p = w.nodes();
  noise.validate(p);
  require_invertible_model(w);
  const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(p, p) - w.weights());
  const Matrix mixing = lu.solve(Matrix::Identity(p, p));
  const Vector variances = noise.sigmas.array().square();
  Matrix cov = mixing * variances.asDiagonal() * mixing.transpose();
  return 0.5 * (cov + cov.transpose());
}

Dataset generate_synthetic(const WeightedGraph& w, const NoiseSpec& noise,
                           Index n, std::uint64_t seed) {
  const Index p = w.nodes();
  noise.validate(p);
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "synthetic sample count must be >= 1");
  }
  require_invertible_model(w);

  auto engine = make_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix innovations(p, n);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < p; ++i) {
      innovations(i, k) = noise.sigmas(i) * normal(engine);
    }
  }
  const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(p, p) - w.weights());
  Matrix samples = lu.solve(innovations).transpose();
  return Dataset(std::move(samples));
}

Index CommunitySpec::nodes() const {
  Index total = 0;
  for (Index b : blocks) total += b;
  return total;
}

void CommunitySpec::validate() const {
  if (blocks.empty()) {
    throw Error(ErrorCode::InvalidArgument, "community spec needs at least one block");
  }
  for (Index b : blocks) {
    if (b < 1) throw Error(ErrorCode::InvalidArgument, "block sizes must be >= 1");
  }
  if (nodes() < 2) {
    throw Error(ErrorCode::TooFewNodes, "community graph needs at least 2 nodes");
  }
  if (!(weight_min >= 0.0 && weight_min <= weight_max && weight_max < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "weight range must satisfy 0 <= weight_min <= weight_max < 1");
  }
  if (inter_edges < 0) {
    throw Error(ErrorCode::InvalidArgument, "inter_edges must be >= 0");
  }
  Index within = 0;
  for (Index b : blocks) within += b * b;
  const Index available = nodes() * nodes() - within;
  if (inter_edges > available) {
    throw Error(ErrorCode::InvalidArgument,
                "inter_edges=" + std::to_string(inter_edges) + " exceeds the " +
                    std::to_string(available) + " possible cross-block links");
  }
  if (!(variance_max > 0.0) || !std::isfinite(variance_max)) {
    throw Error(ErrorCode::InvalidArgument, "variance_max must be positive");
  }
  if (max_retries < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 1");
  }
}

WeightedGraph make_community_graph(const CommunitySpec& spec) {
  spec.validate();
  const Index p = spec.nodes();
  std::vector<Index> block_of;
  std::vector<Index> block_start;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    block_start.push_back(static_cast<Index>(block_of.size()));
    for (Index k = 0; k < spec.blocks[b]; ++k) {
      block_of.push_back(static_cast<Index>(b));
    }
  }
  std::vector<std::pair<Index, Index>> cross;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (block_of[static_cast<std::size_t>(i)] != block_of[static_cast<std::size_t>(j)]) {
        cross.emplace_back(i, j);
      }
    }
  }

  auto engine = make_engine(spec.seed, 0);
  std::uniform_real_distribution<double> magnitude(spec.weight_min, spec.weight_max);
  std::bernoulli_distribution coin(0.5);
  auto draw = [&] { return coin(engine) ? magnitude(engine) : -magnitude(engine); };

  for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
    Matrix w = Matrix::Zero(p, p);
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
      const Index start = block_start[b];
      const Index size = spec.blocks[b];
      for (Index u = start; u < start + size; ++u) {
        for (Index v = u + 1; v < start + size; ++v) {
          if (spec.bidirectional) {
            w(u, v) = draw();
            w(v, u) = draw();
          } else if (coin(engine)) {
            w(u, v) = draw();
          } else {
            w(v, u) = draw();
          }
        }
      }
    }
    auto pool = cross;
    std::shuffle(pool.begin(), pool.end(), engine);
    for (Index e = 0; e < spec.inter_edges; ++e) {
      const auto [i, j] = pool[static_cast<std::size_t>(e)];
      w(i, j) = draw();
    }
    if (invertible(Matrix::Identity(p, p) - w) && spectral_radius(w) < 1.0) {
      return WeightedGraph(std::move(w));
    }
  }
  throw Error(ErrorCode::UnstableGraph,
              "no stable community graph after " +
                  std::to_string(spec.max_retries) + " draws");
}

NoiseSpec make_noise(const CommunitySpec& spec) {
  spec.validate();
  auto engine = make_engine(spec.seed, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NoiseSpec noise;
  noise.sigmas.resize(spec.nodes());
  for (Index i = 0; i < spec.nodes(); ++i) {
    const double variance = spec.variance_max * (1.0 - unit(engine));
    noise.sigmas(i) = std::sqrt(variance);
  }
  return noise;
}

}  // namespace pcgraph
