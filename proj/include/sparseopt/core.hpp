#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sparseopt/error.hpp"

namespace sparseopt {

using Vector = std::vector<double>;

/// Column-major dense matrix. The design matrix X is n x p; column j is the
/// j-th feature.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }

  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> data() const noexcept { return data_; }

  /// X w
  Vector multiply(std::span<const double> w) const;
  void multiply(std::span<const double> w, std::span<double> out) const;
  /// X^T r
  Vector multiply_transpose(std::span<const double> r) const;
  void multiply_transpose(std::span<const double> r, std::span<double> out) const;

  DenseMatrix select_columns(std::span<const std::size_t> columns) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Group {
  std::vector<std::size_t> indices;  // sorted, unique, < p
  double weight = 1.0;               // d_g > 0
};

enum class StructureKind { Partition, Tree };

/// Groups over {0, ..., dim-1}. For a Tree, any two groups are nested or
/// disjoint and every group appears before each group strictly containing it.
struct GroupStructure {
  std::vector<Group> groups;
  StructureKind kind = StructureKind::Partition;
  std::size_t dim = 0;
};

GroupStructure singleton_partition(std::size_t p);
/// Reorders groups by increasing size (stable), which is always a valid
/// processing order for nested-or-disjoint families.
GroupStructure order_tree(GroupStructure gs);

// Penalty variants. Group variants carry their structure by value.
struct L1 {};
struct ElasticNet {
  double gamma = 1.0;  // Omega(w) = |w|_1 + gamma/2 |w|_2^2
};
struct GroupL1L2 {
  GroupStructure groups;
};
struct GroupL1Linf {
  GroupStructure groups;
};
struct HierL1L2 {
  GroupStructure groups;
};
struct HierL1Linf {
  GroupStructure groups;
};
struct L1Ball {
  double radius = 1.0;  // constraint |w|_1 <= radius
};

using PenaltySpec = std::variant<L1, ElasticNet, GroupL1L2, GroupL1Linf, HierL1L2, HierL1Linf, L1Ball>;

std::string penalty_name(const PenaltySpec& penalty);
/// Group structure carried by a group penalty, or nullptr.
const GroupStructure* penalty_groups(const PenaltySpec& penalty);

enum class Loss { Square, Logistic };

struct ProblemSpec {
  Loss loss = Loss::Square;
  DenseMatrix X;
  Vector y;
  double lambda = 0.0;
  PenaltySpec penalty = L1{};

  std::size_t n() const noexcept { return X.rows(); }
  std::size_t p() const noexcept { return X.cols(); }
};

struct ValidationError {
  ErrorCode code;
  std::string message;
};

std::optional<ValidationError> validate_groups(const GroupStructure& gs);
/// Checks every invariant of the data model; reports the first violation.
std::optional<ValidationError> validate(const ProblemSpec& problem);
/// Throws Error with the code of the first violated invariant.
void require_valid(const ProblemSpec& problem);

/// f(w) + lambda * Omega(w); +inf outside the L1Ball constraint set.
double objective(const ProblemSpec& problem, std::span<const double> w);

struct TraceRecord {
  int iteration = 0;
  double elapsed_seconds = 0.0;
  double objective = 0.0;
  std::optional<double> duality_gap;  // absolute gap, at gap-check iterations
};

struct SolverStats {
  long long inner_iterations = 0;
  int line_search_steps_max = 0;
  long long line_search_steps_total = 0;
  double final_lipschitz = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  Vector final_w;
  bool converged = false;
  // Reweighted-l2 keeps the un-thresholded iterate here.
  std::optional<Vector> raw_w;
  // Per-outer-iteration surrogate objective for reweighted schemes.
  std::vector<double> surrogate_objective;
  SolverStats stats;
};

}  // namespace sparseopt
