#pragma once

#include <string>
#include <vector>

#include "pcgraph/graph.hpp"
#include "pcgraph/suff_stats.hpp"

namespace pcgraph {

struct LsRowDiagnostics {
  Index node = 0;
  Index rank = 0;
  bool singular = false;
};

struct LsResult {
  WeightedGraph graph;
  std::vector<LsRowDiagnostics> rows;
};

/// Unpenalised least-squares rows, w_i = G_{-i}^+ rho_i. Gram eigenvalues
/// below 1e-10 of the largest are dropped, giving the minimum-norm solution
/// for rank-deficient rows.
LsResult ls_learn(const SuffStats& stats);
WeightedGraph ls_learn_graph(const Dataset& data);

/// Node positions in degrees, in node order.
struct GeoCoordinates {
  std::vector<std::string> names;
  std::vector<double> latitude;
  std::vector<double> longitude;

  Index nodes() const noexcept { return static_cast<Index>(latitude.size()); }
  void validate() const;
};

/// One feature vector per node (rows of a P x L matrix).
struct FeatureVectors {
  Matrix rows;

  void validate() const;
};

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in km (haversine).
double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg,
                    double lon2_deg);

/// w'_ij = exp(-d_ij^2 / sum_{k != l} d_kl^2) off the diagonal, where the sum
/// runs over ordered pairs (every unordered pair counted twice). Input is a
/// symmetric matrix of distances. Throws DegenerateGeometry if all distances
/// are zero.
WeightedGraph distance_kernel_graph(const Matrix& distances);

WeightedGraph geodesic_graph(const GeoCoordinates& coords);
WeightedGraph diffusion_graph(const FeatureVectors& features);

}  // namespace pcgraph
