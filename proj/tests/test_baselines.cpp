#include <gtest/gtest.h>

#include <pcgraph/baselines.hpp>
#include <pcgraph/solver.hpp>

#include <numbers>

#include "support/oracles.hpp"

using namespace pcgraph;
namespace orc = pcgraph::oracle;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected pcgraph::Error";
  return ErrorCode::InvalidArgument;
}

// Spherical law of cosines, a different route to the great-circle distance.
double cosine_law_km(double lat1, double lon1, double lat2, double lon2) {
  const double d = std::numbers::pi / 180.0;
  const double c = std::sin(lat1 * d) * std::sin(lat2 * d) +
                   std::cos(lat1 * d) * std::cos(lat2 * d) * std::cos((lon2 - lon1) * d);
  return kEarthRadiusKm * std::acos(std::clamp(c, -1.0, 1.0));
}

void expect_kernel_shape(const WeightedGraph& g) {
  const Matrix& w = g.weights();
  EXPECT_EQ(w, w.transpose());
  for (Index i = 0; i < w.rows(); ++i) {
    EXPECT_EQ(w(i, i), 0.0);
    for (Index j = 0; j < w.cols(); ++j) {
      if (i == j) continue;
      EXPECT_GT(w(i, j), 0.0);
      EXPECT_LE(w(i, j), 1.0);
    }
  }
}

}  // namespace

TEST(LeastSquares, ExactLinearRelation) {
  Matrix x(4, 2);
  x.col(0) << 1.0, -2.0, 0.5, 3.0;
  x.col(1) = 0.5 * x.col(0);
  const auto result = ls_learn(SuffStats::from_dataset(Dataset(x)));
  EXPECT_NEAR(result.graph(1, 0), 0.5, 1e-14);
  EXPECT_NEAR(result.graph(0, 1), 2.0, 1e-14);
  EXPECT_FALSE(result.rows[0].singular);
}

TEST(LeastSquares, NormalEquations) {
  std::mt19937_64 rng(31);
  const Matrix x = orc::random_matrix(40, 6, rng) *
                   (Matrix::Identity(6, 6) + 0.4 * orc::random_matrix(6, 6, rng));
  const auto g = ls_learn_graph(Dataset(x));
  for (Index i = 0; i < 6; ++i) {
    const Vector resid = x.col(i) - x * g.weights().row(i).transpose();
    EXPECT_LE((orc::drop_column(x, i).transpose() * resid).cwiseAbs().maxCoeff(),
              1e-8 * x.col(i).norm());
  }
}

TEST(LeastSquares, IndependentColumnsShrinkWithN) {
  std::mt19937_64 rng(32);
  const Matrix x = orc::random_matrix(40000, 5, rng);
  const double small = ls_learn_graph(Dataset(x.topRows(400))).weights().cwiseAbs().maxCoeff();
  const double large = ls_learn_graph(Dataset(x)).weights().cwiseAbs().maxCoeff();
  EXPECT_LT(large, 5.0 / std::sqrt(40000.0));
  EXPECT_LT(large, small);
}

TEST(LeastSquares, RankDeficientRowsAreFlaggedAndMinimumNorm) {
  Matrix x(2, 4);
  x << 1, 2, 0, 1, 0, 1, 1, 2;
  const auto result = ls_learn(SuffStats::from_dataset(Dataset(x)));
  for (const auto& row : result.rows) {
    EXPECT_TRUE(row.singular);
    EXPECT_EQ(row.rank, 2);
  }
  for (Index i = 0; i < 4; ++i) {
    const Matrix rest = orc::drop_column(x, i);
    const Vector expected = rest.completeOrthogonalDecomposition().pseudoInverse() * x.col(i);
    const auto others = other_nodes(4, i);
    for (std::size_t k = 0; k < others.size(); ++k) {
      EXPECT_NEAR(result.graph(i, others[k]), expected(static_cast<Index>(k)), 1e-8);
    }
  }
}

TEST(LeastSquares, EqualsRidgeWithoutRegulariser) {
  std::mt19937_64 rng(33);
  const auto s = SuffStats::from_dataset(Dataset(orc::random_matrix(30, 5, rng)));
  const auto g = ls_learn(s).graph;
  for (Index i = 0; i < 5; ++i) {
    const Vector ridge = ridge_estimate(s, i, Vector::Ones(4), 0.0);
    const auto others = other_nodes(5, i);
    for (std::size_t k = 0; k < others.size(); ++k) {
      EXPECT_NEAR(g(i, others[k]), ridge(static_cast<Index>(k)), 1e-8);
    }
  }
}

TEST(Haversine, AgreesWithCosineLaw) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> lat(-80.0, 80.0), lon(-180.0, 180.0);
  for (int t = 0; t < 50; ++t) {
    const double a = lat(rng), b = lon(rng), c = lat(rng), d = lon(rng);
    EXPECT_NEAR(haversine_km(a, b, c, d), cosine_law_km(a, b, c, d), 1e-6);
  }
  EXPECT_NEAR(haversine_km(0, 0, 0, 180), std::numbers::pi * kEarthRadiusKm, 1e-9);
  EXPECT_EQ(haversine_km(10, 20, 10, 20), 0.0);
}

TEST(GeodesicGraph, AntipodalPair) {
  const GeoCoordinates coords{{"a", "b"}, {0.0, 0.0}, {0.0, 180.0}};
  const auto g = geodesic_graph(coords);
  EXPECT_NEAR(g(0, 1), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(g(1, 0), std::exp(-0.5), 1e-15);
}

TEST(GeodesicGraph, ShapeAndErrors) {
  const GeoCoordinates coords{{}, {59.3, 57.7, 55.6, 63.8}, {18.1, 12.0, 13.0, 20.3}};
  expect_kernel_shape(geodesic_graph(coords));
  const GeoCoordinates same{{}, {1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}};
  EXPECT_EQ(code_of([&] { geodesic_graph(same); }), ErrorCode::DegenerateGeometry);
  const GeoCoordinates bad{{}, {91.0, 0.0}, {0.0, 0.0}};
  EXPECT_THROW(geodesic_graph(bad), Error);
}

TEST(DiffusionGraph, TwoNodesByHand) {
  Matrix r(2, 2);
  r << 0, 0, 1, 0;
  EXPECT_NEAR(diffusion_graph(FeatureVectors{r})(0, 1), std::exp(-0.5), 1e-15);
}

TEST(DiffusionGraph, IdenticalVectorsAreDegenerate) {
  EXPECT_EQ(code_of([] { diffusion_graph(FeatureVectors{Matrix::Ones(3, 4)}); }),
            ErrorCode::DegenerateGeometry);
}

TEST(DiffusionGraph, PermutationEquivariant) {
  std::mt19937_64 rng(35);
  const Matrix r = orc::random_matrix(6, 4, rng);
  const auto g = diffusion_graph(FeatureVectors{r});
  expect_kernel_shape(g);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.indices() << 3, 0, 5, 1, 4, 2;
  const auto gp = diffusion_graph(FeatureVectors{perm * r});
  EXPECT_LE((gp.weights() - perm * g.weights() * perm.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DiffusionGraph, DistanceScaleInvariance) {
  std::mt19937_64 rng(36);
  const Matrix r = orc::random_matrix(5, 3, rng);
  const auto g = diffusion_graph(FeatureVectors{r});
  for (double c : {0.125, 2.0, 4096.0}) {
    EXPECT_TRUE(diffusion_graph(FeatureVectors{c * r}) == g);
  }
  for (double c : {0.3, 7.0}) {
    EXPECT_LE((diffusion_graph(FeatureVectors{c * r}).weights() - g.weights()).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(DistanceKernel, ScaleInvariantAndValidated) {
  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
  const auto g = distance_kernel_graph(d);
  EXPECT_TRUE(distance_kernel_graph(8.0 * d) == g);
  const double total = 2.0 * (1.0 + 4.0 + 2.25);
  EXPECT_NEAR(g(0, 2), std::exp(-4.0 / total), 1e-15);
  EXPECT_THROW(distance_kernel_graph(Matrix::Zero(2, 3)), Error);
}
