#include <gtest/gtest.h>

#include <pcgraph/suff_stats.hpp>

#include "support/oracles.hpp"

using namespace pcgraph;
namespace orc = pcgraph::oracle;

TEST(SuffStats, SingleSampleByHand) {
  Matrix x(1, 2);
  x << 1, 2;
  const auto s = SuffStats::from_dataset(Dataset(x));
  EXPECT_EQ(s.samples_count(), 1);
  EXPECT_DOUBLE_EQ(s.gram_without(0)(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(s.cross(0)(0), 2.0);
  EXPECT_DOUBLE_EQ(s.target_energy(0), 1.0);
  EXPECT_DOUBLE_EQ(s.column_norm_sq(0), 1.0);
  EXPECT_DOUBLE_EQ(s.column_norm_sq(1), 4.0);
}

TEST(SuffStats, AllZeroDataset) {
  const auto s = SuffStats::from_dataset(Dataset(Matrix::Zero(7, 4)));
  EXPECT_TRUE(s.gram().isZero(0.0));
  EXPECT_EQ(s.samples_count(), 7);
}

TEST(SuffStats, MatchesDenseProducts) {
  std::mt19937_64 rng(1);
  const Matrix x = orc::random_matrix(50, 5, rng);
  const auto s = SuffStats::from_dataset(Dataset(x));
  for (Index i = 0; i < 5; ++i) {
    const Matrix rest = orc::drop_column(x, i);
    const Matrix g = rest.transpose() * rest;
    const Vector rho = rest.transpose() * x.col(i);
    EXPECT_LE((s.gram_without(i) - g).norm(), 1e-12 * g.norm());
    EXPECT_LE((s.cross(i) - rho).norm(), 1e-12 * rho.norm());
    EXPECT_NEAR(s.target_energy(i), x.col(i).squaredNorm(), 1e-12 * x.col(i).squaredNorm());
  }
}

TEST(SuffStats, RankOneFromZerosMatchesBatch) {
  const Vector ones = Vector::Ones(4);
  const auto updated = suffstats_rank_one_update(SuffStats::zeros(4), ones);
  const auto batch = SuffStats::from_dataset(Dataset(Matrix(ones.transpose())));
  EXPECT_EQ(updated.gram(), batch.gram());
  EXPECT_EQ(updated.samples_count(), 1);
}

TEST(SuffStats, SequentialUpdatesMatchBatch) {
  std::mt19937_64 rng(2);
  const Matrix x = orc::random_matrix(100, 6, rng);
  auto s = SuffStats::zeros(6);
  for (Index k = 0; k < x.rows(); ++k) s.add_sample(x.row(k).transpose());
  const auto batch = SuffStats::from_dataset(Dataset(x));
  EXPECT_EQ(s.samples_count(), 100);
  EXPECT_LE((s.gram() - batch.gram()).norm(), 1e-10 * batch.gram().norm());
}

TEST(SuffStats, UpdateRejectsBadSamples) {
  auto s = SuffStats::zeros(3);
  try {
    s.add_sample(Vector::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  Vector bad = Vector::Ones(3);
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(s.add_sample(bad), Error);
  EXPECT_EQ(s.samples_count(), 0);
}

TEST(SuffStats, GramWithoutIsPsd) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Matrix x = orc::random_matrix(4, 7, rng);  // rank deficient on purpose
    const auto s = SuffStats::from_dataset(Dataset(x));
    for (Index i = 0; i < 7; ++i) {
      const Matrix g = s.gram_without(i);
      const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff();
      EXPECT_GE(min_eig, -1e-10 * g.norm());
    }
  }
}

TEST(SuffStats, OtherNodes) {
  EXPECT_EQ(other_nodes(4, 2), (std::vector<Index>{0, 1, 3}));
  EXPECT_EQ(other_nodes(2, 0), (std::vector<Index>{1}));
}
