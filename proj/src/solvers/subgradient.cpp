#include <cmath>
#include <limits>

#include "common.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {

SolverTrace solve_subgradient(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  const SubgradientStep& step = config.subgradient_step;
  if (!(step.a > 0.0) || step.b < 0.0 || step.exponent < 0.0)
    throw Error(ErrorCode::NonPositiveParameter, "subgradient step needs a > 0, b >= 0, exponent >= 0");
  const bool ball = std::holds_alternative<L1Ball>(problem.penalty);
  const std::size_t p = problem.p();

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  if (ball) prox_inplace(problem.penalty, w, 0.0);
  detail::SmoothState state;
  detail::evaluate(problem, w, state);
  double best = state.f + detail::penalty_term(problem, w);
  Vector best_w = w;
  auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(0, best, check.gap);
  bool converged = check.converged && check.gap.has_value();
  const bool every = detail::gap_every_iteration(problem);

  // Records carry the best objective so far; gaps refer to the current iterate.
  for (long long t = 1; !converged && !rec.out_of_budget(t - 1); ++t) {
    const double size = step.a / std::pow(static_cast<double>(t) + step.b, step.exponent);
    if (ball) {
      for (std::size_t j = 0; j < p; ++j) w[j] -= size * state.grad[j];
      prox_inplace(problem.penalty, w, 0.0);
    } else {
      const Vector s = subgradient(problem.penalty, w);
      for (std::size_t j = 0; j < p; ++j) w[j] -= size * (state.grad[j] + problem.lambda * s[j]);
    }
    detail::evaluate(problem, w, state);
    const double F = state.f + detail::penalty_term(problem, w);
    if (F < best) {
      best = F;
      best_w = w;
    }
    std::optional<double> gap;
    if (every || t % 10 == 0) {
      check = detail::check_gap(problem, w, state, config.tol);
      gap = check.gap;
      converged = check.converged && gap.has_value();
    }
    rec.add(t, best, gap);
  }
  rec.trace.final_w = converged ? std::move(w) : std::move(best_w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

SubgradientStep select_subgradient_step(const ProblemSpec& problem, int iterations) {
  SubgradientStep chosen;
  double best = std::numeric_limits<double>::infinity();
  for (double a : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    for (double b : {1e2, 1e3, 1e4}) {
      SolverConfig config;
      config.tol = 1e-15;
      config.max_iter = iterations;
      config.subgradient_step = {a, b, 1.0};
      const SolverTrace trace = solve_subgradient(problem, config);
      const double value = trace.records.back().objective;
      if (value < best) {
        best = value;
        chosen = config.subgradient_step;
      }
    }
  }
  return chosen;
}

}  // namespace sparseopt
