#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sparseopt/core.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt {

struct GreedyResult {
  std::vector<std::size_t> support;  // selection order for MP/OMP, ascending for IHT
  Vector w;                          // original (un-normalized) coordinates
  Vector residual_norms;             // |y - Xw|_2, starting with |y|_2
};

/// Matching pursuit on internally unit-normalized columns. Stops once s
/// distinct columns carry weight (a new index would exceed s), after
/// max_steps, or when the residual is orthogonal to every column.
GreedyResult matching_pursuit(const DenseMatrix& X, std::span<const double> y, std::size_t s,
                              std::size_t max_steps);

enum class OmpSelection { MaxCorrelation, MaxDecrease };

/// Orthogonal matching pursuit with a least-squares refit on the support after
/// every selection. Columns numerically in the span of the support are
/// skipped; the run ends early when no admissible column is left.
GreedyResult omp(const DenseMatrix& X, std::span<const double> y, std::size_t s,
                 OmpSelection selection = OmpSelection::MaxDecrease);

/// Iterative hard thresholding for the square loss (the penalty is ignored).
/// Uses config.max_iter, config.l0_init and config.line_search_factor.
GreedyResult iht(const ProblemSpec& problem, std::size_t s, const SolverConfig& config);

struct ConcavePenalty {
  enum class Kind { LogEps, LqEps };
  Kind kind = Kind::LogEps;
  double epsilon = 1e-3;
  double q = 0.5;  // LqEps only, in (0, 1)

  static ConcavePenalty log_eps(double epsilon) { return {Kind::LogEps, epsilon, 0.5}; }
  static ConcavePenalty lq_eps(double q, double epsilon) { return {Kind::LqEps, epsilon, q}; }

  /// zeta(t) for t >= 0: log(t + eps) or (t + eps)^q.
  double value(double t) const;
  /// zeta'(t) for t >= 0.
  double derivative(double t) const;
};

struct ReweightedL1Result {
  SolverTrace trace;  // one record per outer iteration, objective = f + lambda sum zeta(|w_j|)
  std::vector<std::vector<std::size_t>> supports;
  Vector objectives;  // nonconvex objective after each outer iteration
  // f(w^{k+1}) + lambda sum_j [zeta(|w^k_j|) + zeta'(|w^k_j|)(|w^{k+1}_j| - |w^k_j|)] for k >= 0,
  // aligned with objectives[k + 1].
  Vector surrogates;
  // First outer iteration after which the support never changed again.
  std::size_t stable_from = 0;
};

/// Majorize-minimize for f(w) + lambda sum_j zeta(|w_j|). Iteration 0 is a
/// plain Lasso; each later one solves the weighted Lasso with weights
/// zeta'(|w_j|) by column scaling, warm-started at the previous iterate, with
/// the inner solver run to relative gap 1e-8. The default inner solver is
/// cd (square loss) or cd-smooth (logistic), both monotone from a warm start.
/// The problem's penalty must be L1.
ReweightedL1Result reweighted_l1(const ProblemSpec& problem, const ConcavePenalty& zeta, int outer_iters,
                                 std::optional<SolverId> inner = std::nullopt);

}  // namespace sparseopt
