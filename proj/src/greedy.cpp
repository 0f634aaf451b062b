#include "sparseopt/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparseopt/kernels.hpp"
#include "sparseopt/linalg.hpp"
#include "sparseopt/losses.hpp"
#include "solvers/common.hpp"

namespace sparseopt {
namespace {

struct Normalized {
  DenseMatrix X;
  Vector scale;  // original column norms, 0 for zero columns
};

Normalized normalize_columns(const DenseMatrix& X) {
  Normalized out{X, Vector(X.cols(), 0.0)};
  for (std::size_t j = 0; j < X.cols(); ++j) {
    const double nrm = std::sqrt(kernels::sum_sq(X.col(j)));
    out.scale[j] = nrm;
    if (nrm > 0.0) kernels::scale(1.0 / nrm, out.X.col(j));
  }
  return out;
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::sum_sq(v)); }

}  // namespace

GreedyResult matching_pursuit(const DenseMatrix& X, std::span<const double> y, std::size_t s,
                              std::size_t max_steps) {
  if (y.size() != X.rows()) throw Error(ErrorCode::DimensionMismatch, "y length differs from X rows");
  const Normalized nx = normalize_columns(X);
  const std::size_t p = X.cols();
  GreedyResult res;
  Vector wn(p, 0.0);
  Vector r(y.begin(), y.end());
  Vector corr(p);
  std::vector<char> used(p, 0);
  res.residual_norms.push_back(norm2(r));
  for (std::size_t step = 0; step < max_steps; ++step) {
    nx.X.multiply_transpose(r, corr);
    std::size_t best = p;
    for (std::size_t j = 0; j < p; ++j) {
      if (nx.scale[j] == 0.0) continue;
      if (best == p || std::fabs(corr[j]) > std::fabs(corr[best])) best = j;
    }
    if (best == p || corr[best] == 0.0) break;
    if (!used[best]) {
      if (res.support.size() == s) break;
      used[best] = 1;
      res.support.push_back(best);
    }
    wn[best] += corr[best];
    kernels::axpy(-corr[best], nx.X.col(best), r);
    res.residual_norms.push_back(norm2(r));
  }
  res.w.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j)
    if (nx.scale[j] > 0.0) res.w[j] = wn[j] / nx.scale[j];
  return res;
}

GreedyResult omp(const DenseMatrix& X, std::span<const double> y, std::size_t s, OmpSelection selection) {
  if (y.size() != X.rows()) throw Error(ErrorCode::DimensionMismatch, "y length differs from X rows");
  const Normalized nx = normalize_columns(X);
  const std::size_t p = X.cols();
  constexpr double kSpanFloor = 1e-12;

  GreedyResult res;
  Vector r(y.begin(), y.end());
  res.residual_norms.push_back(norm2(r));
  Vector corr(p);
  Vector perp_sq(p);  // |P_perp x_j|^2 for the current support
  std::vector<char> blocked(p, 0);
  for (std::size_t j = 0; j < p; ++j) {
    perp_sq[j] = nx.scale[j] > 0.0 ? 1.0 : 0.0;
    blocked[j] = nx.scale[j] == 0.0;
  }
  std::vector<Vector> basis;
  CholeskyFactor chol;
  Vector coef;
  Vector qx(p);

  while (res.support.size() < s) {
    nx.X.multiply_transpose(r, corr);
    std::size_t best = p;
    double best_score = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (blocked[j]) continue;
      if (perp_sq[j] <= kSpanFloor) {
        blocked[j] = 1;
        continue;
      }
      const double score =
          selection == OmpSelection::MaxDecrease ? corr[j] * corr[j] / perp_sq[j] : std::fabs(corr[j]);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best == p) break;

    const auto& J = res.support;
    Vector cross(J.size());
    for (std::size_t k = 0; k < J.size(); ++k) cross[k] = kernels::dot(nx.X.col(J[k]), nx.X.col(best));
    if (!chol.can_append(cross, 1.0)) {
      blocked[best] = 1;
      continue;
    }
    chol.append(cross, 1.0);
    res.support.push_back(best);
    blocked[best] = 1;

    // New orthonormal direction, Gram-Schmidt applied twice.
    Vector q(nx.X.col(best).begin(), nx.X.col(best).end());
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) kernels::axpy(-kernels::dot(b, q), b, q);
    const double qn = norm2(q);
    if (qn > 0.0) {
      kernels::scale(1.0 / qn, q);
      nx.X.multiply_transpose(q, qx);
      for (std::size_t j = 0; j < p; ++j) perp_sq[j] = std::max(0.0, perp_sq[j] - qx[j] * qx[j]);
      basis.push_back(std::move(q));
    }

    coef.assign(J.size(), 0.0);
    for (std::size_t k = 0; k < J.size(); ++k) coef[k] = kernels::dot(nx.X.col(J[k]), y);
    chol.solve(coef);
    std::copy(y.begin(), y.end(), r.begin());
    for (std::size_t k = 0; k < J.size(); ++k) kernels::axpy(-coef[k], nx.X.col(J[k]), r);
    res.residual_norms.push_back(norm2(r));
    if (res.residual_norms.back() == 0.0) break;
  }
  res.w.assign(p, 0.0);
  for (std::size_t k = 0; k < res.support.size(); ++k)
    res.w[res.support[k]] = coef[k] / nx.scale[res.support[k]];
  return res;
}

GreedyResult iht(const ProblemSpec& problem, std::size_t s, const SolverConfig& config) {
  require_valid(problem);
  detail::require_loss(problem, Loss::Square, "iht");
  const std::size_t p = problem.p();
  GreedyResult res;
  Vector w(p, 0.0);
  detail::SmoothState state;
  detail::evaluate(problem, w, state);
  auto residual_norm = [&](const Vector& margins) {
    double acc = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double d = problem.y[i] - margins[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  };
  res.residual_norms.push_back(residual_norm(state.margins));
  if (s == 0) {
    res.w = std::move(w);
    return res;
  }
  double L = detail::initial_lipschitz(problem, config);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Vector z(p);
  Vector next(p);
  Vector margins(problem.n());
  std::vector<std::size_t> order(p);
  for (long long it = 0; it < config.max_iter; ++it) {
    double f_next = 0.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      for (std::size_t j = 0; j < p; ++j) z[j] = w[j] - state.grad[j] / L;
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return std::fabs(z[a]) > std::fabs(z[b]); });
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t k = 0; k < std::min(s, p); ++k) next[order[k]] = z[order[k]];
      problem.X.multiply(next, margins);
      f_next = detail::evaluate_value(problem, margins);
      double model = state.f;
      double dist = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = next[j] - w[j];
        model += state.grad[j] * d;
        dist += d * d;
      }
      model += 0.5 * L * dist;
      if (f_next <= model + 4.0 * eps * (std::fabs(state.f) + std::fabs(f_next))) break;
      L *= config.line_search_factor;
    }
    double change = 0.0;
    for (std::size_t j = 0; j < p; ++j) change = std::max(change, std::fabs(next[j] - w[j]));
    w.swap(next);
    state.margins = margins;
    detail::evaluate_from_margins(problem, state);
    res.residual_norms.push_back(residual_norm(state.margins));
    if (change <= 1e-10) break;
  }
  for (std::size_t j = 0; j < p; ++j)
    if (w[j] != 0.0) res.support.push_back(j);
  res.w = std::move(w);
  return res;
}

double ConcavePenalty::value(double t) const {
  return kind == Kind::LogEps ? std::log(t + epsilon) : std::pow(t + epsilon, q);
}

double ConcavePenalty::derivative(double t) const {
  return kind == Kind::LogEps ? 1.0 / (t + epsilon) : q * std::pow(t + epsilon, q - 1.0);
}

ReweightedL1Result reweighted_l1(const ProblemSpec& problem, const ConcavePenalty& zeta, int outer_iters,
                                 std::optional<SolverId> inner) {
  require_valid(problem);
  if (!std::holds_alternative<L1>(problem.penalty))
    throw Error(ErrorCode::UnsupportedPenalty, "reweighted l1 needs an L1-shaped penalty");
  if (!(zeta.epsilon > 0.0) || (zeta.kind == ConcavePenalty::Kind::LqEps && !(zeta.q > 0.0 && zeta.q < 1.0)))
    throw Error(ErrorCode::NonPositiveParameter, "concave penalty needs eps > 0 and q in (0, 1)");
  const SolverId solver = inner.value_or(problem.loss == Loss::Square ? SolverId::Cd : SolverId::CdSmooth);
  const std::size_t p = problem.p();
  auto nonconvex = [&](std::span<const double> w) {
    double pen = 0.0;
    for (double v : w) pen += zeta.value(std::fabs(v));
    return loss_value(problem, w) + problem.lambda * pen;
  };

  ReweightedL1Result out;
  const SolverConfig outer_config;
  detail::Recorder rec(outer_config);
  Vector w(p, 0.0);
  Vector weights(p, 1.0);
  ProblemSpec scaled = problem;
  for (int k = 0; k < outer_iters; ++k) {
    if (k > 0)
      for (std::size_t j = 0; j < p; ++j) weights[j] = zeta.derivative(std::fabs(w[j]));
    // Weighted Lasso in v = weights .* w on columns X_j / weights_j.
    for (std::size_t j = 0; j < p; ++j) {
      const auto src = problem.X.col(j);
      auto dst = scaled.X.col(j);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / weights[j];
    }
    SolverConfig cfg;
    cfg.tol = 1e-8;
    Vector start(p);
    for (std::size_t j = 0; j < p; ++j) start[j] = w[j] * weights[j];
    cfg.initial_w = std::move(start);
    const SolverTrace inner_trace = solve(scaled, solver, cfg);
    rec.trace.stats.inner_iterations += static_cast<long long>(inner_trace.records.size());

    Vector next(p);
    for (std::size_t j = 0; j < p; ++j) next[j] = inner_trace.final_w[j] / weights[j];
    if (k > 0) {
      double lin = 0.0;
      for (std::size_t j = 0; j < p; ++j)
        lin += zeta.value(std::fabs(w[j])) + weights[j] * (std::fabs(next[j]) - std::fabs(w[j]));
      out.surrogates.push_back(loss_value(problem, next) + problem.lambda * lin);
    }
    w.swap(next);
    const double obj = nonconvex(w);
    out.objectives.push_back(obj);
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < p; ++j)
      if (w[j] != 0.0) support.push_back(j);
    if (out.supports.empty() || support != out.supports.back()) out.stable_from = static_cast<std::size_t>(k);
    out.supports.push_back(std::move(support));
    rec.add(k, obj, std::nullopt);
  }
  rec.trace.surrogate_objective = out.surrogates;
  rec.trace.final_w = std::move(w);
  rec.trace.converged = true;
  out.trace = std::move(rec.trace);
  return out;
}

}  // namespace sparseopt
