#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparseopt/core.hpp"

namespace sparseopt {

/// Upper-triangular R with R^T R = A for a growing/shrinking SPD matrix A.
/// Columns are appended one at a time and removed with Givens rotations.
class CholeskyFactor {
 public:
  /// Relative pivot floor: appending fails when pivot^2 <= floor * A_kk.
  explicit CholeskyFactor(double pivot_floor = 1e-12) : pivot_floor_(pivot_floor) {}

  std::size_t size() const noexcept { return columns_.size(); }
  void clear() { columns_.clear(); }

  /// cross = A(0..k-1, k), diag = A(k, k). Throws SingularGram.
  void append(std::span<const double> cross, double diag);
  /// Would `append` succeed? Leaves the factor unchanged.
  bool can_append(std::span<const double> cross, double diag) const;
  void remove(std::size_t position);

  /// Solves A x = b in place.
  void solve(std::span<double> b) const;
  /// Solves R^T z = b in place.
  void solve_lower(std::span<double> b) const;

  double r(std::size_t i, std::size_t j) const { return i <= j ? columns_[j][i] : 0.0; }
  /// Dense R^T R, row-major k x k (for drift checks).
  std::vector<double> reconstruct() const;

 private:
  double pivot_floor_;
  std::vector<Vector> columns_;  // column j holds R(0..j, j)
};

/// Factor a dense SPD matrix (row-major k x k). Throws SingularGram.
CholeskyFactor cholesky(std::span<const double> a, std::size_t k, double pivot_floor = 1e-12);

/// Largest eigenvalue of X^T X by power iteration from a fixed-seed start.
double max_eigenvalue_gram(const DenseMatrix& X, double tol = 1e-9, int max_iter = 10000,
                           std::uint64_t seed = 0x5eed);
/// Largest eigenvalue of a symmetric PSD matrix (row-major k x k).
double max_eigenvalue_sym(std::span<const double> a, std::size_t k, double tol = 1e-12,
                          int max_iter = 10000);

/// X_S^T X_S for the listed columns, row-major |S| x |S|.
std::vector<double> gram(const DenseMatrix& X, std::span<const std::size_t> columns);

}  // namespace sparseopt
