#include "sparseopt/linalg.hpp"

#include <cmath>
#include <random>

#include "sparseopt/kernels.hpp"

namespace sparseopt {

bool CholeskyFactor::can_append(std::span<const double> cross, double diag) const {
  Vector z(cross.begin(), cross.end());
  solve_lower(z);
  const double pivot_sq = diag - kernels::sum_sq(z);
  return pivot_sq > pivot_floor_ * std::fabs(diag) && pivot_sq > 0.0;
}

void CholeskyFactor::append(std::span<const double> cross, double diag) {
  if (cross.size() != size()) throw Error(ErrorCode::DimensionMismatch, "cholesky append size");
  Vector column(cross.begin(), cross.end());
  solve_lower(column);
  const double pivot_sq = diag - kernels::sum_sq(column);
  if (!(pivot_sq > pivot_floor_ * std::fabs(diag)) || !(pivot_sq > 0.0))
    throw Error(ErrorCode::SingularGram, "new column is numerically in the span of the active set");
  column.push_back(std::sqrt(pivot_sq));
  columns_.push_back(std::move(column));
}

void CholeskyFactor::remove(std::size_t position) {
  if (position >= size()) throw Error(ErrorCode::OutOfRange, "cholesky remove position");
  columns_.erase(columns_.begin() + static_cast<std::ptrdiff_t>(position));
  // Columns from `position` on are now upper Hessenberg: column j has j+2 rows.
  const std::size_t k = columns_.size();
  for (std::size_t j = position; j < k; ++j) {
    const double a = columns_[j][j];
    const double b = columns_[j][j + 1];
    const double rr = std::hypot(a, b);
    const double c = rr > 0.0 ? a / rr : 1.0;
    const double s = rr > 0.0 ? b / rr : 0.0;
    columns_[j][j] = rr;
    columns_[j][j + 1] = 0.0;
    for (std::size_t l = j + 1; l < k; ++l) {
      const double x = columns_[l][j];
      const double y = columns_[l][j + 1];
      columns_[l][j] = c * x + s * y;
      columns_[l][j + 1] = -s * x + c * y;
    }
    columns_[j].pop_back();
  }
}

void CholeskyFactor::solve_lower(std::span<double> b) const {
  // R^T z = b: row i of R^T is column i of R.
  const std::size_t k = size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vector& col = columns_[i];
    double s = b[i];
    if (i > 0) s -= kernels::dot(std::span<const double>(col.data(), i), b.first(i));
    b[i] = s / col[i];
  }
}

void CholeskyFactor::solve(std::span<double> b) const {
  solve_lower(b);
  const std::size_t k = size();
  for (std::size_t ii = k; ii-- > 0;) {
    b[ii] /= columns_[ii][ii];
    const double v = b[ii];
    if (v != 0.0 && ii > 0)
      kernels::axpy(-v, std::span<const double>(columns_[ii].data(), ii), b.first(ii));
  }
}

std::vector<double> CholeskyFactor::reconstruct() const {
  const std::size_t k = size();
  std::vector<double> a(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      const std::size_t m = std::min(i, j) + 1;
      double s = kernels::dot(std::span<const double>(columns_[i].data(), m),
                              std::span<const double>(columns_[j].data(), m));
      a[i * k + j] = s;
      a[j * k + i] = s;
    }
  return a;
}

CholeskyFactor cholesky(std::span<const double> a, std::size_t k, double pivot_floor) {
  CholeskyFactor f(pivot_floor);
  Vector cross;
  for (std::size_t j = 0; j < k; ++j) {
    cross.assign(j, 0.0);
    for (std::size_t i = 0; i < j; ++i) cross[i] = a[i * k + j];
    f.append(cross, a[j * k + j]);
  }
  return f;
}

double max_eigenvalue_gram(const DenseMatrix& X, double tol, int max_iter, std::uint64_t seed) {
  const std::size_t p = X.cols();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(p);
  for (double& x : v) x = normal(rng);
  kernels::scale(1.0 / std::sqrt(kernels::sum_sq(v)), v);
  Vector xv(X.rows());
  Vector next(p);
  // For unit v, |X^T X v| lies between the Rayleigh quotient and lambda_max.
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    X.multiply(v, xv);
    X.multiply_transpose(xv, next);
    const double nrm = std::sqrt(kernels::sum_sq(next));
    if (nrm == 0.0) return 0.0;
    kernels::scale(1.0 / nrm, next);
    v.swap(next);
    const bool done = it > 0 && std::fabs(nrm - estimate) <= tol * nrm;
    estimate = nrm;
    if (done) break;
  }
  return estimate;
}

double max_eigenvalue_sym(std::span<const double> a, std::size_t k, double tol, int max_iter) {
  if (k == 0) return 0.0;
  if (k == 1) return a[0];
  Vector v(k, 1.0);
  // Deterministic asymmetric start avoids being orthogonal to the top eigenvector.
  for (std::size_t i = 0; i < k; ++i) v[i] += 1e-3 * static_cast<double>(i + 1);
  kernels::scale(1.0 / std::sqrt(kernels::sum_sq(v)), v);
  Vector next(k);
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < k; ++i) next[i] = kernels::dot(a.subspan(i * k, k), v);
    const double nrm = std::sqrt(kernels::sum_sq(next));
    if (nrm == 0.0) return 0.0;
    kernels::scale(1.0 / nrm, next);
    v.swap(next);
    const bool done = it > 0 && std::fabs(nrm - estimate) <= tol * nrm;
    estimate = nrm;
    if (done) break;
  }
  return estimate;
}

std::vector<double> gram(const DenseMatrix& X, std::span<const std::size_t> columns) {
  const std::size_t k = columns.size();
  std::vector<double> g(k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      const double s = kernels::dot(X.col(columns[a]), X.col(columns[b]));
      g[a * k + b] = s;
      g[b * k + a] = s;
    }
  return g;
}

}  // namespace sparseopt
