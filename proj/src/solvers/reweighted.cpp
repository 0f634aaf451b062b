#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/linalg.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

// Solves (X^T X / n + lambda diag(D)) w = X^T y / n.
class WeightedRidge {
 public:
  WeightedRidge(const ProblemSpec& problem) : problem_(problem) {
    const std::size_t n = problem.n();
    const std::size_t p = problem.p();
    const double inv_n = 1.0 / static_cast<double>(n);
    dual_form_ = n < p && problem.lambda > 0.0;
    rhs_ = problem.X.multiply_transpose(problem.y);
    for (double& v : rhs_) v *= inv_n;
    if (!dual_form_) {
      std::vector<std::size_t> all(p);
      for (std::size_t j = 0; j < p; ++j) all[j] = j;
      gram_ = gram(problem.X, all);
      for (double& v : gram_) v *= inv_n;
    }
  }

  Vector solve(std::span<const double> D) const {
    const std::size_t n = problem_.n();
    const std::size_t p = problem_.p();
    const double lambda = problem_.lambda;
    if (!dual_form_) {
      std::vector<double> a = gram_;
      for (std::size_t j = 0; j < p; ++j) a[j * p + j] += lambda * D[j];
      Vector w = rhs_;
      cholesky(a, p, 1e-14).solve(w);
      return w;
    }
    // w = D^{-1} X^T (X D^{-1} X^T + n lambda I)^{-1} y
    std::vector<double> k(n * n, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const auto col = problem_.X.col(j);
      const double s = 1.0 / D[j];
      for (std::size_t a = 0; a < n; ++a) {
        const double ca = s * col[a];
        if (ca == 0.0) continue;
        for (std::size_t b = a; b < n; ++b) k[a * n + b] += ca * col[b];
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      k[a * n + a] += static_cast<double>(n) * lambda;
      for (std::size_t b = 0; b < a; ++b) k[a * n + b] = k[b * n + a];
    }
    Vector z = problem_.y;
    cholesky(k, n, 1e-14).solve(z);
    Vector w = problem_.X.multiply_transpose(z);
    for (std::size_t j = 0; j < p; ++j) w[j] /= D[j];
    return w;
  }

 private:
  const ProblemSpec& problem_;
  bool dual_form_ = false;
  Vector rhs_;
  std::vector<double> gram_;
};

}  // namespace

SolverTrace solve_reweighted_l2(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::require_loss(problem, Loss::Square, "rel2");
  GroupStructure gs;
  if (std::holds_alternative<L1>(problem.penalty)) {
    gs = singleton_partition(problem.p());
  } else if (const auto* g = std::get_if<GroupL1L2>(&problem.penalty)) {
    gs = g->groups;
  } else {
    throw Error(ErrorCode::UnsupportedPenalty, "rel2 supports L1 and GroupL1L2");
  }
  const EpsilonSchedule& sched = config.epsilon_schedule;
  const double lambda = problem.lambda;

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  detail::SmoothState state;
  detail::evaluate(problem, w, state);
  auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(0, state.f + detail::penalty_term(problem, w), check.gap);
  bool converged = check.converged;
  Vector reported = w;

  const WeightedRidge ridge(problem);
  Vector D(problem.p());
  double eps = sched.initial;
  for (long long t = 1; !converged && !rec.out_of_budget(t - 1); ++t) {
    for (const Group& g : gs.groups) {
      double sq = 0.0;
      for (std::size_t j : g.indices) sq += w[j] * w[j];
      const double eta = std::sqrt(sq + eps);
      for (std::size_t j : g.indices) D[j] = g.weight / eta;
    }
    Vector next = ridge.solve(D);
    double change = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) change = std::max(change, std::fabs(next[j] - w[j]));
    w.swap(next);

    // Smoothed objective f(w) + lambda sum_g d_g sqrt(|w_g|^2 + eps).
    detail::evaluate(problem, w, state);
    double smooth_pen = 0.0;
    for (const Group& g : gs.groups) {
      double sq = 0.0;
      for (std::size_t j : g.indices) sq += w[j] * w[j];
      smooth_pen += g.weight * std::sqrt(sq + eps);
    }
    rec.trace.surrogate_objective.push_back(state.f + lambda * smooth_pen);

    const double cutoff = std::sqrt(eps);
    reported = w;
    for (const Group& g : gs.groups) {
      double sq = 0.0;
      for (std::size_t j : g.indices) sq += w[j] * w[j];
      if (std::sqrt(sq) <= cutoff)
        for (std::size_t j : g.indices) reported[j] = 0.0;
    }
    detail::evaluate(problem, reported, state);
    check = detail::check_gap(problem, reported, state, config.tol);
    rec.add(t, state.f + detail::penalty_term(problem, reported), check.gap);
    converged = check.converged;
    rec.trace.stats.inner_iterations = t;

    if (change <= cutoff) {
      if (eps > sched.floor) {
        eps = std::max(sched.floor, eps * sched.shrink);
      } else if (change <= 1e-15 * std::max(1.0, kernels::abs_max(w))) {
        break;  // stalled at the smallest smoothing level
      }
    }
  }
  rec.trace.final_w = std::move(reported);
  rec.trace.raw_w = std::move(w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

}  // namespace sparseopt
