#include <gtest/gtest.h>

#include <pcgraph/graph.hpp>

#include <limits>

using namespace pcgraph;

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

}  // namespace

TEST(ValidateGraph, ZeroTwoByTwoIsValid) {
  EXPECT_FALSE(validate_graph(Matrix::Zero(2, 2)).has_value());
}

TEST(ValidateGraph, DiagonalEntryReported) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 0) = 0.5;
  const auto issue = validate_graph(w);
  ASSERT_TRUE(issue);
  EXPECT_EQ(issue->code, ErrorCode::NonZeroDiagonal);
  EXPECT_EQ(issue->row, 0);
}

TEST(ValidateGraph, NonFiniteEntryReportedWithPosition) {
  Matrix w = Matrix::Zero(3, 3);
  w(1, 2) = std::numeric_limits<double>::quiet_NaN();
  const auto issue = validate_graph(w);
  ASSERT_TRUE(issue);
  EXPECT_EQ(issue->code, ErrorCode::NonFinite);
  EXPECT_EQ(issue->row, 1);
  EXPECT_EQ(issue->col, 2);
  w(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(validate_graph(w)->code, ErrorCode::NonFinite);
}

TEST(ValidateGraph, ShapeChecks) {
  EXPECT_EQ(validate_graph(Matrix::Zero(1, 1))->code, ErrorCode::TooFewNodes);
  EXPECT_EQ(validate_graph(Matrix::Zero(2, 3))->code, ErrorCode::DimensionMismatch);
}

TEST(WeightedGraph, ConstructorEnforcesInvariants) {
  Matrix w = Matrix::Zero(2, 2);
  w(1, 1) = 1.0;
  EXPECT_EQ(code_of([&] { WeightedGraph g(w); }), ErrorCode::NonZeroDiagonal);
  EXPECT_EQ(code_of([] { WeightedGraph::zeros(1); }), ErrorCode::TooFewNodes);
}

TEST(WeightedGraph, EdgeCount) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = 0.3;
  w(2, 0) = -1e-3;
  const WeightedGraph g(w);
  EXPECT_EQ(g.nodes(), 3);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_EQ(g.edge_count(1e-2), 1);
  EXPECT_EQ(WeightedGraph::zeros(4).edge_count(), 0);
  EXPECT_DOUBLE_EQ(g(0, 1), 0.3);
}

TEST(Dataset, RejectsNonFinite) {
  Matrix x = Matrix::Ones(3, 2);
  x(2, 1) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { Dataset d(x); }), ErrorCode::NonFinite);
}

TEST(Dataset, HeadKeepsCenter) {
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const Dataset d(x, Vector::Constant(2, 0.5));
  const auto h = d.head(2);
  EXPECT_EQ(h.samples_count(), 2);
  EXPECT_EQ(h.samples(), x.topRows(2));
  EXPECT_EQ(h.center(), d.center());
  EXPECT_EQ(code_of([&] { (void)d.head(4); }), ErrorCode::InvalidArgument);
}

TEST(NodeSplit, ValidatesIndices) {
  EXPECT_NO_THROW(NodeSplit({0, 1}, {2}, 3));
  EXPECT_EQ(code_of([] { NodeSplit s({0, 1}, {1}, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { NodeSplit s({0, 3}, {1}, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { NodeSplit s({}, {1}, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { NodeSplit s({0, 0}, {1}, 3); }), ErrorCode::InvalidArgument);
}
