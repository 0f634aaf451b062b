#pragma once

// Test-only reference computations. Nothing here calls into the library's
// penalty, loss or solver code.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sparseopt/core.hpp"

namespace oracle {

using sparseopt::DenseMatrix;
using sparseopt::GroupStructure;
using sparseopt::PenaltySpec;
using sparseopt::Vector;

/// Omega(w) evaluated directly from the definition.
double norm(const PenaltySpec& penalty, std::span<const double> w);

/// One subgradient of Omega at w, from the definition.
Vector norm_subgradient(const PenaltySpec& penalty, std::span<const double> w);

/// argmin 1/2 |u - w|^2 + mu Omega(w) by subgradient descent with step
/// 1/t (the objective is 1-strongly convex). The averages over (T/4, T/2]
/// and (T/2, T] are combined by Richardson extrapolation.
Vector prox_subgradient(const PenaltySpec& penalty, std::span<const double> u, double mu,
                        long iterations = 1000000);

/// Projection onto the l1 ball by enumerating every sign pattern in
/// {-1, 0, +1}^p and solving the equality-constrained least squares on it.
Vector project_l1_ball_enumerate(std::span<const double> u, double radius);

/// Projection onto {sum_g d_g |w_g|_2 <= radius} by bisection on the
/// multiplier of the constraint.
Vector project_group_ball_bisect(std::span<const double> u, const GroupStructure& gs, double radius);

/// Least-squares solution min |y - X w| through Eigen's column-pivoting QR.
Vector least_squares(const DenseMatrix& X, std::span<const double> y);

/// Residual y - X_S w_S of the least-squares fit on the listed columns.
Vector projection_residual(const DenseMatrix& X, std::span<const double> y, std::span<const std::size_t> columns);

/// Smallest eigenvalue of X^T X / n.
double min_eigenvalue_gram(const DenseMatrix& X);

DenseMatrix gaussian_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng, double scale = 1.0);
Vector gaussian_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0);
/// n x p with orthonormal columns scaled by `scale` (n >= p).
DenseMatrix orthonormal_columns(std::size_t n, std::size_t p, std::mt19937_64& rng, double scale = 1.0);

/// Random partition of {0..p-1} into groups of random size with weights in [0.5, 2].
GroupStructure random_partition(std::size_t p, std::mt19937_64& rng);
/// Random tree (nested-or-disjoint) over {0..p-1} with depth at most `depth`,
/// listed children before parents.
GroupStructure random_tree(std::size_t p, int depth, std::mt19937_64& rng);

}  // namespace oracle
