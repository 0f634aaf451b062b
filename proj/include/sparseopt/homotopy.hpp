#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sparseopt/core.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt {

/// One affine piece of the path: w_J(lambda) = intercept - lambda * slope for
/// lambda in [lambda_low, lambda_high], zero outside J.
struct PathSegment {
  double lambda_high = 0.0;
  double lambda_low = 0.0;
  std::vector<std::size_t> active;  // sorted
  std::vector<int> signs;           // +-1, aligned with `active`
  Vector intercept;
  Vector slope;
};

struct RegularizationPath {
  std::vector<PathSegment> segments;
  double lambda_max = 0.0;
  double gamma_en = 0.0;
  std::size_t p = 0;
};

/// Homotopy path of min (1/2n)|y - Xw|^2 + (gamma_en/2)|w|^2 + lambda |w|_1 from
/// lambda_max = |X^T y|_inf / n down to lambda_min (default 1e-4 lambda_max) or
/// until max_kinks segments. Throws SingularGram when an active Gram block is
/// numerically singular (set gamma_en > 0) and TieDetected when two events
/// fall within relative 1e-10 of each other.
RegularizationPath lasso_path(const DenseMatrix& X, std::span<const double> y,
                              std::optional<double> lambda_min = std::nullopt, int max_kinks = 100000,
                              double gamma_en = 0.0);

/// Exact solution at lambda. Zero for lambda >= lambda_max; OutOfRange below
/// the end of the computed path.
Vector path_solution_at(const RegularizationPath& path, double lambda);

/// Lasso optimality conditions with relative tolerance `tol`; gamma_en adds
/// the ridge term to the correlations.
bool check_kkt(const DenseMatrix& X, std::span<const double> y, double lambda, std::span<const double> w,
               double tol, double gamma_en = 0.0);

/// Square loss with L1 or ElasticNet, as a solver run: the path is followed
/// down to problem.lambda and evaluated there.
SolverTrace solve_homotopy(const ProblemSpec& problem, const SolverConfig& config);

}  // namespace sparseopt
