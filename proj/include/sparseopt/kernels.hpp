#pragma once

// Dense level-1/level-2 kernels behind a runtime-selected backend.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2+FMA
// variant is compiled separately and chosen at startup when the CPU supports
// it. The environment variable SPARSEOPT_KERNELS=scalar forces the reference
// path. Results of the two backends agree to rounding (summation order and
// fused multiply-add differ), never bit-for-bit across backends; within one
// backend every kernel is deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace sparseopt::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*abs_sum)(const double* a, std::size_t n);
  double (*abs_max)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // out = sign(u) * max(|u| - mu, 0)
  void (*soft_threshold)(const double* u, double mu, double* out, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled or the CPU lacks the features.
const KernelTable* avx2_table();

Backend active_backend();
std::string_view backend_name(Backend backend);
bool backend_available(Backend backend);
// Returns false (and leaves the active backend unchanged) when unavailable.
bool set_backend(Backend backend);
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double sum_sq(std::span<const double> a) { return active().sum_sq(a.data(), a.size()); }
inline double abs_sum(std::span<const double> a) { return active().abs_sum(a.data(), a.size()); }
inline double abs_max(std::span<const double> a) { return active().abs_max(a.data(), a.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }
inline void soft_threshold(std::span<const double> u, double mu, std::span<double> out) {
  active().soft_threshold(u.data(), mu, out.data(), u.size());
}

// Column-major matrix-vector products. `data` holds `cols` columns of length
// `rows`. gemv skips columns whose coefficient is exactly zero.
void gemv(std::span<const double> data, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out);
void gemv_t(std::span<const double> data, std::size_t rows, std::size_t cols,
            std::span<const double> r, std::span<double> out);

}  // namespace sparseopt::kernels
