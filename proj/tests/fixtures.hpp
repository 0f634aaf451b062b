#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparseopt/core.hpp"

namespace fixtures {

using namespace sparseopt;

inline ProblemSpec make_problem(Loss loss, DenseMatrix X, Vector y, double lambda, PenaltySpec penalty = L1{}) {
  ProblemSpec pr;
  pr.loss = loss;
  pr.X = std::move(X);
  pr.y = std::move(y);
  pr.lambda = lambda;
  pr.penalty = std::move(penalty);
  return pr;
}

/// y = X w0 + noise with a sparse w0; unit-variance columns.
inline ProblemSpec random_lasso(std::size_t n, std::size_t p, std::uint64_t seed, double lambda_fraction = 0.1,
                                PenaltySpec penalty = L1{}) {
  std::mt19937_64 rng(seed);
  DenseMatrix X = oracle::gaussian_matrix(n, p, rng);
  Vector w0(p, 0.0);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (std::size_t j = 0; j < std::max<std::size_t>(1, p / 5); ++j) w0[j * 5 % p] = unif(rng);
  Vector y = X.multiply(w0);
  const Vector noise = oracle::gaussian_vector(n, rng, 0.1);
  for (std::size_t i = 0; i < n; ++i) y[i] += noise[i];
  const Vector c = X.multiply_transpose(y);
  double lmax = 0.0;
  for (double v : c) lmax = std::max(lmax, std::fabs(v));
  lmax /= static_cast<double>(n);
  return make_problem(Loss::Square, std::move(X), std::move(y), lambda_fraction * lmax, std::move(penalty));
}

/// Labels sign(X w0 + noise) in {-1, +1}.
inline ProblemSpec random_logistic(std::size_t n, std::size_t p, std::uint64_t seed, double lambda_fraction = 0.1,
                                   PenaltySpec penalty = L1{}) {
  std::mt19937_64 rng(seed);
  DenseMatrix X = oracle::gaussian_matrix(n, p, rng);
  const Vector w0 = oracle::gaussian_vector(p, rng);
  Vector u = X.multiply(w0);
  const Vector noise = oracle::gaussian_vector(n, rng, 2.0);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = u[i] + noise[i] >= 0.0 ? 1.0 : -1.0;
  // lambda_max for the logistic loss at w = 0: |X^T y| / (2n).
  const Vector c = X.multiply_transpose(y);
  double lmax = 0.0;
  for (double v : c) lmax = std::max(lmax, std::fabs(v));
  lmax /= 2.0 * static_cast<double>(n);
  return make_problem(Loss::Logistic, std::move(X), std::move(y), lambda_fraction * lmax, std::move(penalty));
}

inline double inf_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
  return m;
}

}  // namespace fixtures
