#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

using detail::SmoothState;

struct Candidate {
  Vector w;
  Vector margins;
  double f = 0.0;
};

// Forward-backward step from `y` with backtracking on L. L only grows.
int backtracking_step(const ProblemSpec& problem, const SolverConfig& config, std::span<const double> y,
                      const SmoothState& at_y, double& L, Candidate& out) {
  const std::size_t p = problem.p();
  out.w.resize(p);
  out.margins.resize(problem.n());
  Vector d(p);
  Vector residual;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int steps = 0;
  for (;;) {
    for (std::size_t j = 0; j < p; ++j) out.w[j] = y[j] - at_y.grad[j] / L;
    prox_inplace(problem.penalty, out.w, problem.lambda / L);
    for (std::size_t j = 0; j < p; ++j) d[j] = out.w[j] - y[j];
    problem.X.multiply(out.w, out.margins);
    out.f = detail::evaluate_value(problem, out.margins);
    const double dd = kernels::sum_sq(d);
    const double model = at_y.f + kernels::dot(at_y.grad, d) + 0.5 * L * dd;
    const double scale = std::fabs(at_y.f) + std::fabs(out.f);
    if (out.f <= model + 4.0 * eps * scale || steps >= 200) break;
    if (0.5 * L * dd <= 1e-10 * scale) {
      // Function differences are lost in rounding here; compare curvature
      // <grad f(w) - grad f(y), w - y> <= L |w - y|^2 through the margins instead.
      residual.resize(problem.n());
      psi_gradient(problem, out.margins, residual);
      double curvature = 0.0;
      for (std::size_t i = 0; i < residual.size(); ++i)
        curvature += (residual[i] - at_y.residual[i]) * (out.margins[i] - at_y.margins[i]);
      if (curvature <= L * dd) break;
    }
    L *= config.line_search_factor;
    ++steps;
  }
  return steps;
}

void note_steps(SolverStats& stats, int steps) {
  stats.line_search_steps_max = std::max(stats.line_search_steps_max, steps);
  stats.line_search_steps_total += steps;
}

double inf_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
  return m;
}

}  // namespace

SolverTrace solve_ista(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  prox_inplace(problem.penalty, w, 0.0);
  SmoothState state;
  detail::evaluate(problem, w, state);
  double L = detail::initial_lipschitz(problem, config);
  const bool every = detail::gap_every_iteration(problem);

  auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(0, state.f + detail::penalty_term(problem, w), check.gap);
  bool converged = check.converged && check.gap.has_value();
  Candidate next;
  for (long long k = 1; !converged && !rec.out_of_budget(k - 1); ++k) {
    note_steps(rec.trace.stats, backtracking_step(problem, config, w, state, L, next));
    const double residual = L * inf_distance(next.w, w);
    w.swap(next.w);
    state.margins.swap(next.margins);
    detail::evaluate_from_margins(problem, state);
    const double F = state.f + detail::penalty_term(problem, w);
    std::optional<double> gap;
    if (every || k % 10 == 0) {
      check = detail::check_gap(problem, w, state, config.tol, residual);
      gap = check.gap;
      converged = check.converged;
    }
    rec.add(k, F, gap);
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  rec.trace.stats.final_lipschitz = L;
  return std::move(rec.trace);
}

SolverTrace solve_fista(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::Recorder rec(config);
  const std::size_t p = problem.p();
  const std::size_t n = problem.n();
  Vector w = detail::initial_point(problem, config);
  prox_inplace(problem.penalty, w, 0.0);
  Vector y = w;
  SmoothState at_y;
  detail::evaluate(problem, y, at_y);
  Vector margins_w = at_y.margins;
  SmoothState at_w;
  double L = detail::initial_lipschitz(problem, config);
  double t = 1.0;
  const bool every = detail::gap_every_iteration(problem);

  auto check = detail::check_gap(problem, w, at_y, config.tol);
  rec.add(0, at_y.f + detail::penalty_term(problem, w), check.gap);
  bool converged = check.converged && check.gap.has_value();
  Candidate next;
  for (long long k = 1; !converged && !rec.out_of_budget(k - 1); ++k) {
    note_steps(rec.trace.stats, backtracking_step(problem, config, y, at_y, L, next));
    const double residual = L * inf_distance(next.w, y);
    const double F = next.f + detail::penalty_term(problem, next.w);
    std::optional<double> gap;
    if (every || k % 10 == 0) {
      at_w.margins = next.margins;
      detail::evaluate_from_margins(problem, at_w);
      check = detail::check_gap(problem, next.w, at_w, config.tol, residual);
      gap = check.gap;
      converged = check.converged;
    }
    rec.add(k, F, gap);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    for (std::size_t j = 0; j < p; ++j) y[j] = next.w[j] + momentum * (next.w[j] - w[j]);
    at_y.margins.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      at_y.margins[i] = next.margins[i] + momentum * (next.margins[i] - margins_w[i]);
    detail::evaluate_from_margins(problem, at_y);
    w.swap(next.w);
    margins_w.swap(next.margins);
    t = t_next;
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  rec.trace.stats.final_lipschitz = L;
  return std::move(rec.trace);
}

}  // namespace sparseopt
