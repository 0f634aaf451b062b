#include "sparseopt/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparseopt/duality.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/linalg.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"
#include "solvers/common.hpp"

namespace sparseopt {
namespace {

constexpr double kGuard = 1e-12;
constexpr double kTie = 1e-10;
constexpr int kRefactorEvery = 50;

struct Event {
  double lambda = -1.0;
  std::size_t index = 0;  // column for entering, position in J for leaving
  bool entering = false;
  int sign = 0;
};

class ActiveGram {
 public:
  ActiveGram(const DenseMatrix& X, double ridge) : X_(X), ridge_(ridge) {}

  void add(std::size_t j) {
    Vector cross(active_.size());
    for (std::size_t k = 0; k < active_.size(); ++k) cross[k] = kernels::dot(X_.col(active_[k]), X_.col(j));
    factor_.append(cross, kernels::sum_sq(X_.col(j)) + ridge_);
    active_.push_back(j);
    maybe_refactor();
  }

  void remove(std::size_t position) {
    factor_.remove(position);
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(position));
    maybe_refactor();
  }

  void solve(std::span<double> b) const { factor_.solve(b); }
  const std::vector<std::size_t>& active() const { return active_; }

 private:
  void maybe_refactor() {
    if (++updates_ % kRefactorEvery != 0) return;
    std::vector<double> a = gram(X_, active_);
    const std::size_t k = active_.size();
    for (std::size_t i = 0; i < k; ++i) a[i * k + i] += ridge_;
    factor_ = cholesky(a, k);
  }

  const DenseMatrix& X_;
  double ridge_;
  CholeskyFactor factor_;
  std::vector<std::size_t> active_;
  int updates_ = 0;
};

PathSegment make_segment(double high, double low, const std::vector<std::size_t>& active,
                         const std::vector<int>& signs, const Vector& a, const Vector& b) {
  std::vector<std::size_t> order(active.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return active[x] < active[y]; });
  PathSegment seg;
  seg.lambda_high = high;
  seg.lambda_low = low;
  for (std::size_t k : order) {
    seg.active.push_back(active[k]);
    seg.signs.push_back(signs[k]);
    seg.intercept.push_back(a[k]);
    seg.slope.push_back(b[k]);
  }
  return seg;
}

}  // namespace

RegularizationPath lasso_path(const DenseMatrix& X, std::span<const double> y, std::optional<double> lambda_min,
                              int max_kinks, double gamma_en) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "y length differs from X rows");
  if (gamma_en < 0.0) throw Error(ErrorCode::NonPositiveParameter, "gamma_en must be >= 0");
  const double nd = static_cast<double>(n);

  RegularizationPath path;
  path.p = p;
  path.gamma_en = gamma_en;
  const Vector corr0 = X.multiply_transpose(y);
  std::size_t first = 0;
  for (std::size_t j = 1; j < p; ++j)
    if (std::fabs(corr0[j]) > std::fabs(corr0[first])) first = j;
  const double top = std::fabs(corr0[first]);
  path.lambda_max = top / nd;
  if (top == 0.0) return path;
  for (std::size_t j = 0; j < p; ++j)
    if (j != first && std::fabs(std::fabs(corr0[j]) - top) <= kTie * top)
      throw Error(ErrorCode::TieDetected, "several columns attain the maximal correlation at lambda_max");

  const double lam_end = lambda_min.value_or(1e-4 * path.lambda_max);
  if (lam_end < 0.0) throw Error(ErrorCode::NonPositiveParameter, "lambda_min must be >= 0");
  if (lam_end >= path.lambda_max) return path;

  ActiveGram active(X, nd * gamma_en);
  std::vector<int> signs;
  active.add(first);
  signs.push_back(corr0[first] > 0.0 ? 1 : -1);
  std::vector<char> in_set(p, 0);
  in_set[first] = 1;

  double lam = path.lambda_max;
  std::size_t last_column = first;
  Vector a;
  Vector b;
  Vector u(n);
  Vector v(n);
  Vector alpha(p);
  Vector beta(p);
  while (static_cast<int>(path.segments.size()) < max_kinks && lam > lam_end) {
    const auto& J = active.active();
    const std::size_t k = J.size();
    a.assign(k, 0.0);
    b.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = kernels::dot(X.col(J[i]), y);
      b[i] = nd * signs[i];
    }
    active.solve(a);
    active.solve(b);
    std::copy(y.begin(), y.end(), u.begin());
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      kernels::axpy(-a[i], X.col(J[i]), u);
      kernels::axpy(b[i], X.col(J[i]), v);
    }
    X.multiply_transpose(u, alpha);
    X.multiply_transpose(v, beta);

    // Nearest event strictly below the current lambda (outside the guard band).
    const double ceiling = lam * (1.0 - kGuard);
    Event best;
    Event second;
    // The column changed at the last kink sits exactly on its boundary; an
    // event for it within the tie band is rounding noise from that kink.
    const double echo = lam * (1.0 - kTie);
    auto consider = [&](const Event& e, std::size_t column) {
      if (!(e.lambda > 0.0) || !(e.lambda < ceiling)) return;
      if (column == last_column && e.lambda >= echo) return;
      if (e.lambda > best.lambda) {
        second = best;
        best = e;
      } else if (e.lambda > second.lambda) {
        second = e;
      }
    };
    for (std::size_t j = 0; j < p; ++j) {
      if (in_set[j]) continue;
      for (int s : {1, -1}) {
        const double denom = s * nd - beta[j];
        if (denom == 0.0) continue;
        consider({alpha[j] / denom, j, true, s}, j);
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (b[i] == 0.0) continue;
      consider({a[i] / b[i], i, false, 0}, J[i]);
    }

    const double next = std::max(best.lambda, lam_end);
    path.segments.push_back(make_segment(lam, next, J, signs, a, b));
    if (best.lambda <= lam_end) break;
    if (second.lambda > 0.0 && best.lambda - second.lambda <= kTie * best.lambda)
      throw Error(ErrorCode::TieDetected, "two path events coincide");
    lam = best.lambda;
    last_column = best.entering ? best.index : J[best.index];
    if (best.entering) {
      active.add(best.index);
      signs.push_back(best.sign);
      in_set[best.index] = 1;
    } else {
      in_set[J[best.index]] = 0;
      signs.erase(signs.begin() + static_cast<std::ptrdiff_t>(best.index));
      active.remove(best.index);
    }
  }
  return path;
}

Vector path_solution_at(const RegularizationPath& path, double lambda) {
  Vector w(path.p, 0.0);
  if (lambda >= path.lambda_max) return w;
  if (lambda < 0.0 || path.segments.empty() || lambda < path.segments.back().lambda_low)
    throw Error(ErrorCode::OutOfRange, "lambda lies below the computed path");
  for (const PathSegment& seg : path.segments) {
    if (lambda < seg.lambda_low) continue;
    for (std::size_t k = 0; k < seg.active.size(); ++k) {
      // A sign flip only happens at the leaving end of the segment, where the value is zero.
      const double v = seg.intercept[k] - lambda * seg.slope[k];
      w[seg.active[k]] = v * seg.signs[k] > 0.0 ? v : 0.0;
    }
    return w;
  }
  return w;
}

bool check_kkt(const DenseMatrix& X, std::span<const double> y, double lambda, std::span<const double> w,
               double tol, double gamma_en) {
  const std::size_t n = X.rows();
  if (y.size() != n || w.size() != X.cols()) throw Error(ErrorCode::DimensionMismatch, "check_kkt lengths");
  Vector r(y.begin(), y.end());
  const Vector xw = X.multiply(w);
  for (std::size_t i = 0; i < n; ++i) r[i] -= xw[i];
  const Vector c = X.multiply_transpose(r);
  const double bound = static_cast<double>(n) * lambda;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) {
      if (std::fabs(c[j]) > bound * (1.0 + tol)) return false;
    } else {
      const double cj = c[j] - static_cast<double>(n) * gamma_en * w[j];
      if (std::fabs(cj - bound * (w[j] > 0.0 ? 1.0 : -1.0)) > bound * tol) return false;
    }
  }
  return true;
}

SolverTrace solve_homotopy(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  detail::require_loss(problem, Loss::Square, "homotopy");
  double gamma_path = 0.0;
  if (const auto* en = std::get_if<ElasticNet>(&problem.penalty)) {
    gamma_path = problem.lambda * en->gamma;
  } else if (!std::holds_alternative<L1>(problem.penalty)) {
    throw Error(ErrorCode::UnsupportedPenalty, "homotopy supports L1 and ElasticNet");
  }
  detail::Recorder rec(config);
  Vector w(problem.p(), 0.0);
  detail::SmoothState state;
  detail::evaluate(problem, w, state);
  auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(0, state.f, check.gap);
  if (!check.converged) {
    const int kinks = static_cast<int>(std::min<long long>(config.max_iter, 1000000000LL));
    const RegularizationPath path = lasso_path(problem.X, problem.y, problem.lambda, kinks, gamma_path);
    if (problem.lambda >= path.lambda_max || (!path.segments.empty() && problem.lambda >= path.segments.back().lambda_low)) {
      w = path_solution_at(path, problem.lambda);
    }
    detail::evaluate(problem, w, state);
    check = detail::check_gap(problem, w, state, config.tol);
    rec.add(std::max<long long>(1, static_cast<long long>(path.segments.size())), state.f + detail::penalty_term(problem, w), check.gap);
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = check.converged;
  rec.trace.stats.inner_iterations = static_cast<long long>(rec.trace.records.back().iteration);
  return std::move(rec.trace);
}

}  // namespace sparseopt
