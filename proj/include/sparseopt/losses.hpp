#pragma once

#include <span>

#include "sparseopt/core.hpp"

namespace sparseopt {

// The empirical risk is f(w) = (1/n) sum_i l(y_i, x_i^T w) = psi_n(X w).
// conjugate_psi below refers to the un-normalized psi(u) = sum_i l(y_i, u_i),
// so psi_n^*(k) = (1/n) psi^*(n k).

struct LossEval {
  double value = 0.0;
  Vector gradient;  // length p
};

LossEval loss_value_grad(const ProblemSpec& problem, std::span<const double> w);
double loss_value(const ProblemSpec& problem, std::span<const double> w);

// Margin-space helpers on u = X w.
double psi_value(const ProblemSpec& problem, std::span<const double> u);  // f, i.e. psi_n(u)
void psi_gradient(const ProblemSpec& problem, std::span<const double> u, std::span<double> out);

/// Numerically stable log(1 + exp(x)).
double log1p_exp(double x);
/// Logistic function 1 / (1 + exp(-x)).
double sigmoid(double x);

/// Upper bound on the Lipschitz constant of grad f: lambda_max(X^T X)/n for
/// the square loss and a quarter of that for the logistic loss.
double lipschitz_bound(const ProblemSpec& problem);

/// psi^*(beta) for the un-normalized psi. Returns +inf outside the domain
/// (logistic: -beta_i y_i must lie in [0, 1]); uses 0 log 0 = 0.
double conjugate_psi(const ProblemSpec& problem, std::span<const double> beta);

struct DualPoint {
  Vector alpha;  // length n, scaled gradient of psi_n at X w
  double scale = 1.0;
  bool feasible = true;
};

/// alpha = min(1, lambda / Omega*(X^T grad psi_n(Xw))) grad psi_n(Xw), so that
/// Omega*(X^T alpha) <= lambda. Hierarchical penalties use the exact tree
/// dual norm. Throws UnsupportedPenalty for ElasticNet and L1Ball.
DualPoint dual_point(const ProblemSpec& problem, std::span<const double> w);

}  // namespace sparseopt
