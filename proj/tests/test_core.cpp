#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "sparseopt/core.hpp"

namespace {

using namespace sparseopt;
using fixtures::make_problem;

ProblemSpec identity_problem(double lambda) {
  return make_problem(Loss::Square, DenseMatrix::identity(2), {1.0, 0.0}, lambda);
}

TEST(Validate, ConsistentLasso) { EXPECT_FALSE(validate(identity_problem(1.0)).has_value()); }

TEST(Validate, PartitionMissingIndex) {
  GroupStructure gs;
  gs.dim = 4;
  gs.groups = {{{0, 1}, 1.0}, {{2}, 1.0}};
  ProblemSpec pr = make_problem(Loss::Square, DenseMatrix(2, 4), {0.0, 0.0}, 1.0, GroupL1L2{gs});
  const auto err = validate(pr);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code, ErrorCode::InvalidGroupStructure);
}

TEST(Validate, LogisticLabels) {
  ProblemSpec pr = make_problem(Loss::Logistic, DenseMatrix::identity(2), {0.5, 1.0}, 1.0);
  const auto err = validate(pr);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->code, ErrorCode::InvalidLabels);
}

TEST(Validate, DimensionAndParameters) {
  EXPECT_EQ(validate(make_problem(Loss::Square, DenseMatrix::identity(2), {1.0}, 1.0))->code,
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(validate(identity_problem(-1.0))->code, ErrorCode::NonPositiveParameter);
  EXPECT_EQ(validate(make_problem(Loss::Square, DenseMatrix::identity(2), {1.0, 0.0}, 1.0, ElasticNet{0.0}))->code,
            ErrorCode::NonPositiveParameter);
  EXPECT_EQ(validate(make_problem(Loss::Square, DenseMatrix::identity(2), {1.0, 0.0}, 1.0, L1Ball{-1.0}))->code,
            ErrorCode::NonPositiveParameter);
  DenseMatrix bad = DenseMatrix::identity(2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(validate(make_problem(Loss::Square, bad, {1.0, 0.0}, 1.0))->code, ErrorCode::NonFiniteValue);
  EXPECT_THROW(require_valid(identity_problem(-1.0)), Error);
}

TEST(Validate, TreeOrderAndNesting) {
  GroupStructure tree;
  tree.kind = StructureKind::Tree;
  tree.dim = 3;
  tree.groups = {{{1}, 1.0}, {{0, 1}, 1.0}, {{2}, 1.0}};
  EXPECT_FALSE(validate_groups(tree).has_value());

  GroupStructure wrong_order = tree;
  std::swap(wrong_order.groups[0], wrong_order.groups[1]);
  EXPECT_EQ(validate_groups(wrong_order)->code, ErrorCode::InvalidGroupStructure);
  EXPECT_FALSE(validate_groups(order_tree(wrong_order)).has_value());

  GroupStructure overlapping = tree;
  overlapping.groups = {{{0, 1}, 1.0}, {{1, 2}, 1.0}};
  EXPECT_EQ(validate_groups(overlapping)->code, ErrorCode::InvalidGroupStructure);

  // A tree penalty needs a tree-tagged structure.
  GroupStructure part = singleton_partition(2);
  ProblemSpec pr = make_problem(Loss::Square, DenseMatrix::identity(2), {1.0, 0.0}, 1.0, HierL1L2{part});
  EXPECT_EQ(validate(pr)->code, ErrorCode::InvalidGroupStructure);
}

TEST(Objective, ClosedForms) {
  EXPECT_DOUBLE_EQ(objective(identity_problem(1.0), Vector{0.0, 0.0}), 0.25);
  EXPECT_DOUBLE_EQ(objective(identity_problem(1.0), Vector{1.0, 0.0}), 1.0);
  ProblemSpec logistic = make_problem(Loss::Logistic, DenseMatrix::identity(1), {1.0}, 0.0);
  EXPECT_DOUBLE_EQ(objective(logistic, Vector{0.0}), std::log(2.0));
  EXPECT_THROW(objective(identity_problem(1.0), Vector{0.0}), Error);
}

TEST(Objective, L1BallSentinel) {
  ProblemSpec pr = make_problem(Loss::Square, DenseMatrix::identity(2), {1.0, 0.0}, 0.0, L1Ball{1.0});
  EXPECT_DOUBLE_EQ(objective(pr, Vector{0.5, 0.5}), 0.125);
  EXPECT_TRUE(std::isinf(objective(pr, Vector{1.0, 1.0})));
}

TEST(Objective, ConvexAlongSegments) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GroupStructure part = oracle::random_partition(6, rng);
  GroupStructure tree = oracle::random_tree(6, 3, rng);
  const PenaltySpec penalties[] = {L1{}, ElasticNet{0.7}, GroupL1L2{part}, GroupL1Linf{part}, HierL1L2{tree},
                                   HierL1Linf{tree}};
  for (Loss loss : {Loss::Square, Loss::Logistic}) {
    for (const PenaltySpec& pen : penalties) {
      ProblemSpec pr = loss == Loss::Square ? fixtures::random_lasso(10, 6, 3, 0.2, pen)
                                            : fixtures::random_logistic(10, 6, 3, 0.2, pen);
      for (int trial = 0; trial < 50; ++trial) {
        const Vector a = oracle::gaussian_vector(6, rng);
        const Vector b = oracle::gaussian_vector(6, rng);
        const double th = unif(rng);
        Vector m(6);
        for (std::size_t j = 0; j < 6; ++j) m[j] = th * a[j] + (1.0 - th) * b[j];
        EXPECT_LE(objective(pr, m), th * objective(pr, a) + (1.0 - th) * objective(pr, b) + 1e-10);
      }
    }
  }
}

TEST(DenseMatrix, Products) {
  const DenseMatrix X = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
  EXPECT_EQ(X.rows(), 3u);
  EXPECT_EQ(X(2, 1), 6.0);
  EXPECT_EQ(X.multiply(Vector{1.0, -1.0}), (Vector{-1.0, -1.0, -1.0}));
  EXPECT_EQ(X.multiply_transpose(Vector{1.0, 0.0, 1.0}), (Vector{6.0, 8.0}));
  const std::size_t cols[] = {1};
  const DenseMatrix S = X.select_columns(cols);
  EXPECT_EQ(S.cols(), 1u);
  EXPECT_EQ(S(1, 0), 4.0);
  EXPECT_THROW(X.multiply(Vector{1.0}), Error);
}

}  // namespace
