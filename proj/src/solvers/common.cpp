#include "common.hpp"

#include <algorithm>
#include <cmath>

#include "sparseopt/kernels.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt::detail {

void evaluate_from_margins(const ProblemSpec& problem, SmoothState& state) {
  state.residual.resize(problem.n());
  state.grad.resize(problem.p());
  psi_gradient(problem, state.margins, state.residual);
  problem.X.multiply_transpose(state.residual, state.grad);
  state.f = psi_value(problem, state.margins);
}

void evaluate(const ProblemSpec& problem, std::span<const double> w, SmoothState& state) {
  state.margins.resize(problem.n());
  problem.X.multiply(w, state.margins);
  evaluate_from_margins(problem, state);
}

double evaluate_value(const ProblemSpec& problem, std::span<const double> margins) {
  return psi_value(problem, margins);
}

double penalty_term(const ProblemSpec& problem, std::span<const double> w) {
  if (const auto* ball = std::get_if<L1Ball>(&problem.penalty)) {
    return kernels::abs_sum(w) <= ball->radius * (1.0 + 1e-12) ? 0.0
                                                                 : std::numeric_limits<double>::infinity();
  }
  if (problem.lambda == 0.0) return 0.0;
  return problem.lambda * norm_value(problem.penalty, w);
}

GapCheck check_gap(const ProblemSpec& problem, std::span<const double> w, const SmoothState& state,
                   double tol, std::optional<double> fixed_point_residual) {
  GapCheck out;
  if (std::holds_alternative<L1Ball>(problem.penalty)) {
    if (fixed_point_residual) {
      const double scale = std::max(1.0, std::fabs(state.f));
      out.converged = *fixed_point_residual <= tol * scale;
    }
    return out;
  }
  const GapCertificate cert = duality_gap(problem, w, state.margins, state.grad);
  out.gap = cert.gap;
  if (problem.lambda == 0.0) {
    out.converged = kernels::abs_max(state.grad) <= tol * std::max(1.0, std::fabs(cert.primal));
  } else {
    out.converged = relative_gap(cert) <= tol;
  }
  return out;
}

Vector initial_point(const ProblemSpec& problem, const SolverConfig& config) {
  if (config.initial_w) {
    if (config.initial_w->size() != problem.p())
      throw Error(ErrorCode::DimensionMismatch, "initial_w has wrong length");
    return *config.initial_w;
  }
  return Vector(problem.p(), 0.0);
}

double initial_lipschitz(const ProblemSpec& problem, const SolverConfig& config) {
  if (config.l0_init > 0.0) return config.l0_init;
  double m = 0.0;
  for (std::size_t j = 0; j < problem.p(); ++j) m = std::max(m, kernels::sum_sq(problem.X.col(j)));
  const double l0 = m / static_cast<double>(problem.n());
  return l0 > 0.0 ? l0 : 1.0;
}

void require_loss(const ProblemSpec& problem, Loss loss, std::string_view solver) {
  if (problem.loss != loss)
    throw Error(ErrorCode::UnsupportedLoss, std::string(solver) + " does not support this loss");
}

}  // namespace sparseopt::detail
