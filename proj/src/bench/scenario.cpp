#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

#include "sparseopt/bench.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt::bench {
namespace {

constexpr std::uint64_t kCalibrationSeed = 0x9e3779b97f4a7c15ULL;
constexpr double kCorrelationFactor = 8.0;

std::mt19937_64 substream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

DenseMatrix gaussian_design(std::size_t n, std::size_t p, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  DenseMatrix X(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) X(i, j) = normal(rng);
  return X;
}

// x_j = rho x_{j-1} + sqrt(1 - rho^2) e_j keeps N(0, 1/n) marginals with
// corr(x_i, x_j) = rho^|i-j|.
DenseMatrix ar1_design(const DenseMatrix& E, double rho) {
  DenseMatrix X = E;
  const double c = std::sqrt(1.0 - rho * rho);
  for (std::size_t j = 1; j < X.cols(); ++j) {
    auto cur = X.col(j);
    const auto prev = X.col(j - 1);
    for (std::size_t i = 0; i < X.rows(); ++i) cur[i] = rho * prev[i] + c * cur[i];
  }
  return X;
}

double pearson(std::span<const double> a, std::span<const double> b, double mean_a, double mean_b, double sd_a,
               double sd_b) {
  if (sd_a == 0.0 || sd_b == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - mean_a) * (b[i] - mean_b);
  return s / (sd_a * sd_b);
}

std::size_t support_size(Regularization reg, std::size_t n, std::size_t p) {
  const double frac = reg == Regularization::Low ? 0.5 : 0.01;
  const auto s = static_cast<std::size_t>(std::llround(frac * static_cast<double>(std::min(n, p))));
  return std::max<std::size_t>(1, s);
}

}  // namespace

ScenarioSpec small_scenario(Correlation corr, Regularization reg, std::uint64_t seed) {
  return {200, 200, corr, reg, seed, 0.01};
}

ScenarioSpec medium_scenario(Correlation corr, Regularization reg, std::uint64_t seed) {
  return {2000, 10000, corr, reg, seed, 0.01};
}

double mean_abs_correlation(const DenseMatrix& X, std::uint64_t seed) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  if (p < 2) return 0.0;
  Vector mean(p);
  Vector sd(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto c = X.col(j);
    mean[j] = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
    double s = 0.0;
    for (double v : c) s += (v - mean[j]) * (v - mean[j]);
    sd[j] = std::sqrt(s);
  }
  double total = 0.0;
  std::size_t count = 0;
  if (p <= 400) {
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) {
        total += std::fabs(pearson(X.col(a), X.col(b), mean[a], mean[b], sd[a], sd[b]));
        ++count;
      }
  } else {
    std::mt19937_64 rng = substream(seed, 11);
    std::uniform_int_distribution<std::size_t> pick(0, p - 1);
    while (count < 20000) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      if (a == b) continue;
      total += std::fabs(pearson(X.col(a), X.col(b), mean[a], mean[b], sd[a], sd[b]));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

double calibrated_rho(std::size_t n, std::size_t p) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({n, p}); it != cache.end()) return it->second;
  }
  std::mt19937_64 rng = substream(kCalibrationSeed, 1);
  const DenseMatrix E = gaussian_design(n, p, rng);
  const double target = kCorrelationFactor * mean_abs_correlation(E, kCalibrationSeed);
  double lo = 0.0;
  double hi = 1.0 - 1e-9;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = mean_abs_correlation(ar1_design(E, mid), kCalibrationSeed);
    if (std::fabs(value - target) <= 1e-4 * target) {
      lo = hi = mid;
      break;
    }
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double rho = 0.5 * (lo + hi);
  std::lock_guard<std::mutex> lock(mu);
  cache[{n, p}] = rho;
  return rho;
}

double suggest_lambda(const DenseMatrix& X, std::span<const double> y, std::size_t target) {
  ProblemSpec problem;
  problem.X = X;
  problem.y.assign(y.begin(), y.end());
  problem.penalty = L1{};
  const Vector corr = X.multiply_transpose(y);
  double lambda_max = 0.0;
  for (double c : corr) lambda_max = std::max(lambda_max, std::fabs(c));
  lambda_max /= static_cast<double>(X.rows());
  if (lambda_max == 0.0) return 0.0;

  const double slack = 0.1 * static_cast<double>(target);
  double lo = std::log(lambda_max * 1e-4);
  double hi = std::log(lambda_max);
  double best_lambda = lambda_max;
  double best_miss = static_cast<double>(target);
  SolverConfig config;
  config.tol = 1e-8;
  Vector warm(X.cols(), 0.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    problem.lambda = std::exp(mid);
    config.initial_w = warm;
    const SolverTrace trace = solve_cd(problem, config);
    warm = trace.final_w;
    const auto nnz = static_cast<double>(
        std::count_if(trace.final_w.begin(), trace.final_w.end(), [](double v) { return v != 0.0; }));
    const double miss = std::fabs(nnz - static_cast<double>(target));
    if (miss < best_miss || (miss == best_miss && problem.lambda > best_lambda)) {
      best_miss = miss;
      best_lambda = problem.lambda;
    }
    if (miss <= slack) break;
    if (nnz > static_cast<double>(target)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best_lambda;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  if (spec.n < 1 || spec.p < 1) throw Error(ErrorCode::NonPositiveParameter, "scenario needs n, p >= 1");
  Scenario sc;
  std::mt19937_64 rng_x = substream(spec.seed, 1);
  sc.X = gaussian_design(spec.n, spec.p, rng_x);
  if (spec.correlation == Correlation::High) {
    sc.rho = calibrated_rho(spec.n, spec.p);
    sc.X = ar1_design(sc.X, sc.rho);
  }

  std::mt19937_64 rng_w = substream(spec.seed, 2);
  sc.target_support = support_size(spec.regularization, spec.n, spec.p);
  std::vector<std::size_t> perm(spec.p);
  std::iota(perm.begin(), perm.end(), 0);
  // Partial Fisher-Yates with an explicit uniform draw keeps this portable
  // across standard libraries.
  for (std::size_t k = 0; k < sc.target_support; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, spec.p - 1);
    std::swap(perm[k], perm[pick(rng_w)]);
  }
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  sc.w_true.assign(spec.p, 0.0);
  for (std::size_t k = 0; k < sc.target_support; ++k) sc.w_true[perm[k]] = unif(rng_w);
  const double wn = std::sqrt(kernels::sum_sq(sc.w_true));
  if (wn > 0.0) kernels::scale(1.0 / wn, sc.w_true);

  std::mt19937_64 rng_e = substream(spec.seed, 3);
  sc.y = sc.X.multiply(sc.w_true);
  const double sigma = std::sqrt(spec.noise_scale * kernels::sum_sq(sc.y) / static_cast<double>(spec.n));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : sc.y) v += sigma * normal(rng_e);

  sc.lambda_suggested = suggest_lambda(sc.X, sc.y, sc.target_support);
  return sc;
}

}  // namespace sparseopt::bench
