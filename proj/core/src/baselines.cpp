#include "pcgraph/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pcgraph {

LsResult ls_learn(const SuffStats& stats) {
  const Index p = stats.nodes();
  if (p < 2) throw Error(ErrorCode::TooFewNodes, "LS needs at least 2 nodes");
  Matrix weights = Matrix::Zero(p, p);
  std::vector<LsRowDiagnostics> rows;
  rows.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(stats.gram_without(i));
    const Vector& ev = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    const Vector projected = es.eigenvectors().transpose() * stats.cross(i);
    Vector scaled = Vector::Zero(ev.size());
    Index rank = 0;
    for (Index k = 0; k < ev.size(); ++k) {
      if (ev(k) > cutoff && ev(k) > 0.0) {
        scaled(k) = projected(k) / ev(k);
        ++rank;
      }
    }
    const Vector w = es.eigenvectors() * scaled;
    const auto others = other_nodes(p, i);
    for (std::size_t k = 0; k < others.size(); ++k) {
      weights(i, others[k]) = w(static_cast<Index>(k));
    }
    rows.push_back({i, rank, rank < ev.size()});
  }
  return LsResult{WeightedGraph(std::move(weights)), std::move(rows)};
}

WeightedGraph ls_learn_graph(const Dataset& data) {
  return ls_learn(SuffStats::from_dataset(data)).graph;
}

void GeoCoordinates::validate() const {
  if (latitude.size() != longitude.size() ||
      (!names.empty() && names.size() != latitude.size())) {
    throw Error(ErrorCode::DimensionMismatch, "coordinate columns differ in length");
  }
  if (latitude.size() < 2) {
    throw Error(ErrorCode::TooFewNodes, "need coordinates for at least 2 nodes");
  }
  for (std::size_t k = 0; k < latitude.size(); ++k) {
    if (!(latitude[k] >= -90.0 && latitude[k] <= 90.0) ||
        !(longitude[k] >= -180.0 && longitude[k] <= 180.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "coordinates of node " + std::to_string(k + 1) + " are out of range");
    }
  }
}

void FeatureVectors::validate() const {
  if (rows.rows() < 2) {
    throw Error(ErrorCode::TooFewNodes, "need features for at least 2 nodes");
  }
  if (rows.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "feature vectors are empty");
  }
  if (!rows.allFinite()) {
    throw Error(ErrorCode::NonFinite, "feature vectors contain non-finite values");
  }
}

double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg,
                    double lon2_deg) {
  constexpr double to_rad = std::numbers::pi / 180.0;
  const double phi1 = lat1_deg * to_rad;
  const double phi2 = lat2_deg * to_rad;
  const double dphi = (lat2_deg - lat1_deg) * to_rad;
  const double dlambda = (lon2_deg - lon1_deg) * to_rad;
  const double s = std::sin(dphi / 2);
  const double t = std::sin(dlambda / 2);
  const double h = std::clamp(s * s + std::cos(phi1) * std::cos(phi2) * t * t, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

WeightedGraph distance_kernel_graph(const Matrix& distances) {
  if (distances.rows() != distances.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "distance matrix must be square");
  }
  const Index p = distances.rows();
  if (p < 2) throw Error(ErrorCode::TooFewNodes, "need at least 2 nodes");
  double normalizer = 0.0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i != j) normalizer += distances(i, j) * distances(i, j);
    }
  }
  if (!(normalizer > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "all node positions coincide");
  }
  Matrix w = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i != j) w(i, j) = std::exp(-distances(i, j) * distances(i, j) / normalizer);
    }
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph geodesic_graph(const GeoCoordinates& coords) {
  coords.validate();
  const Index p = coords.nodes();
  Matrix d = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      d(i, j) = d(j, i) = haversine_km(coords.latitude[a], coords.longitude[a],
                                       coords.latitude[b], coords.longitude[b]);
    }
  }
  return distance_kernel_graph(d);
}

WeightedGraph diffusion_graph(const FeatureVectors& features) {
  features.validate();
  const Index p = features.rows.rows();
  Matrix d = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      d(i, j) = d(j, i) = (features.rows.row(i) - features.rows.row(j)).norm();
    }
  }
  return distance_kernel_graph(d);
}

}  // namespace pcgraph
