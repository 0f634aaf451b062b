#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/linalg.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

using detail::SmoothState;

double soft(double x, double mu) {
  const double t = std::fabs(x) - mu;
  return t > 0.0 ? std::copysign(t, x) : 0.0;
}

// (1/n) sum_i [log(1 + e^{-z_i - delta_i}) - log(1 + e^{-z_i})] where
// sig_neg[i] = sigma(-z_i), computed without cancellation.
double logistic_change(std::span<const double> sig_neg, std::span<const double> delta) {
  double s = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) s += std::log1p(sig_neg[i] * std::expm1(-delta[i]));
  return s / static_cast<double>(delta.size());
}

struct CycleEnd {
  bool converged = false;
};

CycleEnd finish_cycle(const ProblemSpec& problem, const SolverConfig& config, std::span<const double> w,
                      SmoothState& state, detail::Recorder& rec, long long cycle) {
  detail::evaluate(problem, w, state);
  const auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(cycle, state.f + detail::penalty_term(problem, w), check.gap);
  return {check.converged};
}

}  // namespace

SolverTrace solve_cd(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::require_loss(problem, Loss::Square, "cd");
  double gamma = 0.0;
  if (const auto* en = std::get_if<ElasticNet>(&problem.penalty)) {
    gamma = en->gamma;
  } else if (!std::holds_alternative<L1>(problem.penalty)) {
    throw Error(ErrorCode::UnsupportedPenalty, "cd supports L1 and ElasticNet");
  }
  const std::size_t n = problem.n();
  const std::size_t p = problem.p();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = problem.lambda;
  const double ridge = lambda * gamma;

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  SmoothState state;
  bool converged = finish_cycle(problem, config, w, state, rec, 0).converged;

  const bool use_gram = p <= config.gram_memory_budget;
  std::vector<double> G;
  Vector diag(p);
  if (use_gram) {
    std::vector<std::size_t> all(p);
    for (std::size_t j = 0; j < p; ++j) all[j] = j;
    G = gram(problem.X, all);
    for (double& v : G) v *= inv_n;
    for (std::size_t j = 0; j < p; ++j) diag[j] = G[j * p + j];
  } else {
    for (std::size_t j = 0; j < p; ++j) diag[j] = kernels::sum_sq(problem.X.col(j)) * inv_n;
  }

  Vector g = state.grad;   // gram mode: grad f, kept current
  Vector r(n);             // residual mode: y - X w
  for (long long cycle = 1; !converged && !rec.out_of_budget(cycle - 1); ++cycle) {
    if (!use_gram)
      for (std::size_t i = 0; i < n; ++i) r[i] = problem.y[i] - state.margins[i];
    for (std::size_t j = 0; j < p; ++j) {
      const double denom = diag[j] + ridge;
      const double old = w[j];
      double grad_j;
      if (use_gram) {
        grad_j = g[j];
      } else {
        grad_j = -kernels::dot(problem.X.col(j), r) * inv_n;
      }
      const double updated = denom > 0.0 ? soft(diag[j] * old - grad_j, lambda) / denom : 0.0;
      const double delta = updated - old;
      if (delta == 0.0) continue;
      w[j] = updated;
      if (use_gram) {
        kernels::axpy(delta, std::span<const double>(G.data() + j * p, p), g);
      } else {
        kernels::axpy(-delta, problem.X.col(j), r);
      }
    }
    rec.trace.stats.inner_iterations += static_cast<long long>(p);
    converged = finish_cycle(problem, config, w, state, rec, cycle).converged;
    if (use_gram) g = state.grad;
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

SolverTrace solve_cd_smooth(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::require_loss(problem, Loss::Logistic, "cd-smooth");
  if (!std::holds_alternative<L1>(problem.penalty))
    throw Error(ErrorCode::UnsupportedPenalty, "cd-smooth supports L1");
  const std::size_t n = problem.n();
  const std::size_t p = problem.p();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = problem.lambda;
  const ArmijoParams& armijo = config.armijo;

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  SmoothState state;
  bool converged = finish_cycle(problem, config, w, state, rec, 0).converged;
  Vector u = state.margins;
  Vector sig_neg(n);
  Vector delta(n);
  SolverStats& stats = rec.trace.stats;

  for (long long cycle = 1; !converged && !rec.out_of_budget(cycle - 1); ++cycle) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto col = problem.X.col(j);
      double g = 0.0;
      double H = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = sigmoid(-problem.y[i] * u[i]);
        sig_neg[i] = s;
        g -= col[i] * problem.y[i] * s;
        H += col[i] * col[i] * s * (1.0 - s);
      }
      g *= inv_n;
      H = std::max(H * inv_n, 1e-12);
      const double wj = w[j];
      const double d = soft(wj - g / H, lambda / H) - wj;
      if (d == 0.0) continue;
      const double decrease = g * d + armijo.gamma * H * d * d + lambda * (std::fabs(wj + d) - std::fabs(wj));
      double alpha = armijo.alpha0;
      int k = 0;
      bool accepted = false;
      for (; k <= armijo.max_steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) delta[i] = problem.y[i] * alpha * d * col[i];
        const double change =
            logistic_change(sig_neg, delta) + lambda * (std::fabs(wj + alpha * d) - std::fabs(wj));
        if (change <= armijo.sigma * alpha * decrease) {
          accepted = true;
          break;
        }
        alpha *= armijo.beta;
      }
      stats.line_search_steps_max = std::max(stats.line_search_steps_max, k);
      stats.line_search_steps_total += k;
      if (!accepted) continue;
      w[j] = wj + alpha * d;
      kernels::axpy(alpha * d, col, u);
    }
    stats.inner_iterations += static_cast<long long>(p);
    converged = finish_cycle(problem, config, w, state, rec, cycle).converged;
    u = state.margins;
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

SolverTrace solve_bcd(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  bool l2 = true;
  if (std::holds_alternative<GroupL1Linf>(problem.penalty)) {
    l2 = false;
  } else if (!std::holds_alternative<GroupL1L2>(problem.penalty)) {
    throw Error(ErrorCode::UnsupportedPenalty, "bcd supports GroupL1L2 and GroupL1Linf");
  }
  const GroupStructure& gs = *penalty_groups(problem.penalty);
  const std::size_t n = problem.n();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = problem.lambda;
  const bool square = problem.loss == Loss::Square;
  const ArmijoParams& armijo = config.armijo;

  std::vector<double> block_l(gs.groups.size());
  for (std::size_t k = 0; k < gs.groups.size(); ++k) {
    const auto& idx = gs.groups[k].indices;
    double top;
    if (idx.size() == 1) {
      top = kernels::sum_sq(problem.X.col(idx[0]));
    } else {
      top = max_eigenvalue_sym(gram(problem.X, idx), idx.size());
    }
    block_l[k] = square ? top * inv_n : 0.25 * top * inv_n;
  }
  auto block_norm = [&](std::span<const double> v) {
    return l2 ? std::sqrt(kernels::sum_sq(v)) : kernels::abs_max(v);
  };
  // |wg + alpha d| - |wg|; the l2 case avoids cancellation near the optimum.
  auto norm_change = [&](std::span<const double> wg, std::span<const double> d, double alpha, double base) {
    double top = 0.0, sq = 0.0, num = 0.0;
    for (std::size_t a = 0; a < wg.size(); ++a) {
      const double step = alpha * d[a];
      const double next = wg[a] + step;
      top = std::max(top, std::fabs(next));
      sq += next * next;
      num += step * (2.0 * wg[a] + step);
    }
    if (!l2) return top - base;
    const double den = std::sqrt(sq) + base;
    return den > 0.0 ? num / den : 0.0;
  };

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  SmoothState state;
  bool converged = finish_cycle(problem, config, w, state, rec, 0).converged;
  Vector u = state.margins;
  Vector r = state.residual;  // grad psi_n(u)
  Vector sig_neg(n);
  Vector xd(n);
  Vector delta(n);
  Vector wg;
  Vector v;
  Vector d;
  SolverStats& stats = rec.trace.stats;

  for (long long cycle = 1; !converged && !rec.out_of_budget(cycle - 1); ++cycle) {
    for (std::size_t k = 0; k < gs.groups.size(); ++k) {
      const Group& grp = gs.groups[k];
      const std::size_t m = grp.indices.size();
      const double Lg = block_l[k];
      wg.resize(m);
      for (std::size_t a = 0; a < m; ++a) wg[a] = w[grp.indices[a]];
      if (Lg == 0.0) {
        for (std::size_t j : grp.indices) w[j] = 0.0;
        continue;
      }
      if (!square) {
        for (std::size_t i = 0; i < n; ++i) {
          sig_neg[i] = sigmoid(-problem.y[i] * u[i]);
          r[i] = -problem.y[i] * sig_neg[i] * inv_n;
        }
      }
      v.resize(m);
      d.resize(m);
      double gd = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        const double ga = kernels::dot(problem.X.col(grp.indices[a]), r);
        v[a] = wg[a] - ga / Lg;
        d[a] = ga;  // stash the gradient
      }
      if (l2) {
        group_l2_shrink(v, lambda * grp.weight / Lg);
      } else {
        group_linf_shrink(v, lambda * grp.weight / Lg);
      }
      bool moved = false;
      for (std::size_t a = 0; a < m; ++a) {
        const double ga = d[a];
        d[a] = v[a] - wg[a];
        gd += ga * d[a];
        moved = moved || d[a] != 0.0;
      }
      if (!moved) continue;
      std::fill(xd.begin(), xd.end(), 0.0);
      for (std::size_t a = 0; a < m; ++a)
        if (d[a] != 0.0) kernels::axpy(d[a], problem.X.col(grp.indices[a]), xd);

      double alpha = 1.0;
      if (!square) {
        const double base = block_norm(wg);
        const double decrease =
            gd + armijo.gamma * Lg * kernels::sum_sq(d) + lambda * grp.weight * norm_change(wg, d, 1.0, base);
        alpha = armijo.alpha0;
        int steps = 0;
        bool accepted = false;
        for (; steps <= armijo.max_steps; ++steps) {
          for (std::size_t i = 0; i < n; ++i) delta[i] = problem.y[i] * alpha * xd[i];
          const double change =
              logistic_change(sig_neg, delta) + lambda * grp.weight * norm_change(wg, d, alpha, base);
          if (change <= armijo.sigma * alpha * decrease) {
            accepted = true;
            break;
          }
          alpha *= armijo.beta;
        }
        stats.line_search_steps_max = std::max(stats.line_search_steps_max, steps);
        stats.line_search_steps_total += steps;
        if (!accepted) continue;
      }
      for (std::size_t a = 0; a < m; ++a) w[grp.indices[a]] = wg[a] + alpha * d[a];
      kernels::axpy(alpha, xd, u);
      if (square) kernels::axpy(alpha * inv_n, xd, r);
    }
    stats.inner_iterations += static_cast<long long>(gs.groups.size());
    converged = finish_cycle(problem, config, w, state, rec, cycle).converged;
    u = state.margins;
    r = state.residual;
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

}  // namespace sparseopt
