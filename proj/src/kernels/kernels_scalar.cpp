#include <cmath>

#include "sparseopt/kernels.hpp"

namespace sparseopt::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double abs_sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double abs_max_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i]));
  return m;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void soft_threshold_scalar(const double* u, double mu, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::fabs(u[i]) - mu;
    out[i] = t > 0.0 ? std::copysign(t, u[i]) : 0.0;
  }
}

constexpr KernelTable kScalar{
    dot_scalar,  sum_sq_scalar, abs_sum_scalar,       abs_max_scalar,
    axpy_scalar, scale_scalar,  soft_threshold_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace sparseopt::kernels
