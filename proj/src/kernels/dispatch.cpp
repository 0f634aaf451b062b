#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace sparseopt::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SPARSEOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("SPARSEOPT_KERNELS")) {
    if (std::string_view(env) == "scalar") return Backend::Scalar;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{initial_backend()};
  return slot;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(SPARSEOPT_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

bool backend_available(Backend backend) {
  return backend == Backend::Scalar || avx2_table() != nullptr;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool set_backend(Backend backend) {
  if (!backend_available(backend)) return false;
  backend_slot().store(backend, std::memory_order_relaxed);
  return true;
}

const KernelTable& active() {
  if (active_backend() == Backend::Avx2) return *avx2_table();
  return scalar_table();
}

void gemv(std::span<const double> data, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> out) {
  const KernelTable& k = active();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    if (x[j] == 0.0) continue;
    k.axpy(x[j], data.data() + j * rows, out.data(), rows);
  }
}

void gemv_t(std::span<const double> data, std::size_t rows, std::size_t cols,
            std::span<const double> r, std::span<double> out) {
  const KernelTable& k = active();
  for (std::size_t j = 0; j < cols; ++j) out[j] = k.dot(data.data() + j * rows, r.data(), rows);
}

}  // namespace sparseopt::kernels
