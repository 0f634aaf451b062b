#include "sparseopt/losses.hpp"

#include <cmath>
#include <limits>

#include "sparseopt/kernels.hpp"
#include "sparseopt/linalg.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

void check_w(const ProblemSpec& problem, std::span<const double> w) {
  if (w.size() != problem.p()) throw Error(ErrorCode::DimensionMismatch, "w has wrong length");
}

void check_margins(const ProblemSpec& problem, std::span<const double> u) {
  if (u.size() != problem.n()) throw Error(ErrorCode::DimensionMismatch, "margin vector has wrong length");
}

}  // namespace

double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double psi_value(const ProblemSpec& problem, std::span<const double> u) {
  check_margins(problem, u);
  const std::size_t n = problem.n();
  double s = 0.0;
  if (problem.loss == Loss::Square) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = problem.y[i] - u[i];
      s += r * r;
    }
    return s / (2.0 * static_cast<double>(n));
  }
  for (std::size_t i = 0; i < n; ++i) s += log1p_exp(-problem.y[i] * u[i]);
  return s / static_cast<double>(n);
}

void psi_gradient(const ProblemSpec& problem, std::span<const double> u, std::span<double> out) {
  check_margins(problem, u);
  const std::size_t n = problem.n();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (problem.loss == Loss::Square) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (u[i] - problem.y[i]) * inv_n;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = -problem.y[i] * sigmoid(-problem.y[i] * u[i]) * inv_n;
}

LossEval loss_value_grad(const ProblemSpec& problem, std::span<const double> w) {
  check_w(problem, w);
  const Vector u = problem.X.multiply(w);
  Vector r(problem.n());
  psi_gradient(problem, u, r);
  LossEval eval;
  eval.value = psi_value(problem, u);
  eval.gradient = problem.X.multiply_transpose(r);
  return eval;
}

double loss_value(const ProblemSpec& problem, std::span<const double> w) {
  check_w(problem, w);
  return psi_value(problem, problem.X.multiply(w));
}

double lipschitz_bound(const ProblemSpec& problem) {
  const double top = max_eigenvalue_gram(problem.X);
  const double n = static_cast<double>(problem.n());
  return problem.loss == Loss::Square ? top / n : top / (4.0 * n);
}

double conjugate_psi(const ProblemSpec& problem, std::span<const double> beta) {
  check_margins(problem, beta);
  if (problem.loss == Loss::Square) {
    return 0.5 * kernels::sum_sq(beta) + kernels::dot(beta, problem.y);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double v = -beta[i] * problem.y[i];
    if (!(v >= 0.0 && v <= 1.0)) return std::numeric_limits<double>::infinity();
    if (v > 0.0) s += v * std::log(v);
    if (v < 1.0) s += (1.0 - v) * std::log1p(-v);
  }
  return s;
}

DualPoint dual_point(const ProblemSpec& problem, std::span<const double> w) {
  if (std::holds_alternative<ElasticNet>(problem.penalty) || std::holds_alternative<L1Ball>(problem.penalty))
    throw Error(ErrorCode::UnsupportedPenalty, "dual_point needs a norm penalty");
  check_w(problem, w);
  const Vector u = problem.X.multiply(w);
  DualPoint dp;
  dp.alpha.resize(problem.n());
  psi_gradient(problem, u, dp.alpha);
  const Vector grad = problem.X.multiply_transpose(dp.alpha);
  const double dn = tree_dual_norm(problem.penalty, grad);
  if (dn > problem.lambda) dp.scale = problem.lambda / dn;
  kernels::scale(dp.scale, dp.alpha);
  const Vector scaled = problem.X.multiply_transpose(dp.alpha);
  dp.feasible = tree_dual_norm(problem.penalty, scaled) <= problem.lambda * (1.0 + 1e-12);
  return dp;
}

}  // namespace sparseopt
