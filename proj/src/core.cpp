#include "sparseopt/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparseopt/kernels.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major)
    : rows_(rows), cols_(cols), data_(std::move(col_major)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "matrix storage does not match rows*cols");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t n = rows.size();
  const std::size_t p = rows.front().size();
  DenseMatrix m(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < p; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector DenseMatrix::multiply(std::span<const double> w) const {
  Vector out(rows_);
  multiply(w, out);
  return out;
}

void DenseMatrix::multiply(std::span<const double> w, std::span<double> out) const {
  if (w.size() != cols_ || out.size() != rows_)
    throw Error(ErrorCode::DimensionMismatch, "X w: length mismatch");
  kernels::gemv(data_, rows_, cols_, w, out);
}

Vector DenseMatrix::multiply_transpose(std::span<const double> r) const {
  Vector out(cols_);
  multiply_transpose(r, out);
  return out;
}

void DenseMatrix::multiply_transpose(std::span<const double> r, std::span<double> out) const {
  if (r.size() != rows_ || out.size() != cols_)
    throw Error(ErrorCode::DimensionMismatch, "X^T r: length mismatch");
  kernels::gemv_t(data_, rows_, cols_, r, out);
}

DenseMatrix DenseMatrix::select_columns(std::span<const std::size_t> columns) const {
  DenseMatrix sub(rows_, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    auto src = col(columns[k]);
    std::copy(src.begin(), src.end(), sub.col(k).begin());
  }
  return sub;
}

GroupStructure singleton_partition(std::size_t p) {
  GroupStructure gs;
  gs.kind = StructureKind::Partition;
  gs.dim = p;
  gs.groups.reserve(p);
  for (std::size_t j = 0; j < p; ++j) gs.groups.push_back(Group{{j}, 1.0});
  return gs;
}

GroupStructure order_tree(GroupStructure gs) {
  std::stable_sort(gs.groups.begin(), gs.groups.end(), [](const Group& a, const Group& b) {
    return a.indices.size() < b.indices.size();
  });
  return gs;
}

std::string penalty_name(const PenaltySpec& penalty) {
  static constexpr const char* kNames[] = {"L1",       "ElasticNet", "GroupL1L2", "GroupL1Linf",
                                           "HierL1L2", "HierL1Linf", "L1Ball"};
  return kNames[penalty.index()];
}

const GroupStructure* penalty_groups(const PenaltySpec& penalty) {
  if (auto* g = std::get_if<GroupL1L2>(&penalty)) return &g->groups;
  if (auto* g = std::get_if<GroupL1Linf>(&penalty)) return &g->groups;
  if (auto* g = std::get_if<HierL1L2>(&penalty)) return &g->groups;
  if (auto* g = std::get_if<HierL1Linf>(&penalty)) return &g->groups;
  return nullptr;
}

namespace {

std::optional<ValidationError> fail(ErrorCode code, std::string message) {
  return ValidationError{code, std::move(message)};
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Relation between two sorted index sets.
enum class SetRelation { Disjoint, Equal, FirstInSecond, SecondInFirst, Overlapping };

SetRelation relate(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  if (common == 0) return SetRelation::Disjoint;
  if (common == a.size() && common == b.size()) return SetRelation::Equal;
  if (common == a.size()) return SetRelation::FirstInSecond;
  if (common == b.size()) return SetRelation::SecondInFirst;
  return SetRelation::Overlapping;
}

}  // namespace

std::optional<ValidationError> validate_groups(const GroupStructure& gs) {
  if (gs.dim == 0) return fail(ErrorCode::InvalidGroupStructure, "group structure has dim 0");
  for (std::size_t k = 0; k < gs.groups.size(); ++k) {
    const Group& g = gs.groups[k];
    const std::string tag = "group " + std::to_string(k);
    if (g.indices.empty()) return fail(ErrorCode::InvalidGroupStructure, tag + " is empty");
    for (std::size_t i = 0; i < g.indices.size(); ++i) {
      if (g.indices[i] >= gs.dim)
        return fail(ErrorCode::InvalidGroupStructure, tag + " has an index >= p");
      if (i > 0 && g.indices[i] <= g.indices[i - 1])
        return fail(ErrorCode::InvalidGroupStructure, tag + " indices not strictly increasing");
    }
    if (!(g.weight > 0.0) || !std::isfinite(g.weight))
      return fail(ErrorCode::NonPositiveParameter, tag + " weight must be positive");
  }
  if (gs.kind == StructureKind::Partition) {
    std::vector<int> seen(gs.dim, 0);
    for (const Group& g : gs.groups)
      for (std::size_t j : g.indices)
        if (seen[j]++)
          return fail(ErrorCode::InvalidGroupStructure,
                      "partition groups overlap at index " + std::to_string(j));
    for (std::size_t j = 0; j < gs.dim; ++j)
      if (!seen[j])
        return fail(ErrorCode::InvalidGroupStructure,
                    "partition misses index " + std::to_string(j));
    return std::nullopt;
  }
  for (std::size_t a = 0; a < gs.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < gs.groups.size(); ++b) {
      switch (relate(gs.groups[a].indices, gs.groups[b].indices)) {
        case SetRelation::Overlapping:
          return fail(ErrorCode::InvalidGroupStructure,
                      "tree groups " + std::to_string(a) + " and " + std::to_string(b) +
                          " overlap without nesting");
        case SetRelation::SecondInFirst:
          return fail(ErrorCode::InvalidGroupStructure,
                      "tree group " + std::to_string(a) + " precedes its strict subset " +
                          std::to_string(b));
        default:
          break;
      }
    }
  }
  return std::nullopt;
}

std::optional<ValidationError> validate(const ProblemSpec& problem) {
  const std::size_t n = problem.X.rows();
  const std::size_t p = problem.X.cols();
  if (n < 1 || p < 1) return fail(ErrorCode::DimensionMismatch, "X must be at least 1x1");
  if (problem.y.size() != n)
    return fail(ErrorCode::DimensionMismatch, "y has length " + std::to_string(problem.y.size()) +
                                                  ", expected n = " + std::to_string(n));
  if (!all_finite(problem.X.data())) return fail(ErrorCode::NonFiniteValue, "X has non-finite entries");
  if (!all_finite(problem.y)) return fail(ErrorCode::NonFiniteValue, "y has non-finite entries");
  if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda))
    return fail(ErrorCode::NonPositiveParameter, "lambda must be finite and >= 0");
  if (problem.loss == Loss::Logistic) {
    for (double yi : problem.y)
      if (yi != 1.0 && yi != -1.0)
        return fail(ErrorCode::InvalidLabels, "logistic loss requires labels in {-1, +1}");
  }
  if (auto* en = std::get_if<ElasticNet>(&problem.penalty)) {
    if (!(en->gamma > 0.0) || !std::isfinite(en->gamma))
      return fail(ErrorCode::NonPositiveParameter, "elastic-net gamma must be > 0");
  }
  if (auto* ball = std::get_if<L1Ball>(&problem.penalty)) {
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius))
      return fail(ErrorCode::NonPositiveParameter, "l1-ball radius must be > 0");
  }
  if (const GroupStructure* gs = penalty_groups(problem.penalty)) {
    if (gs->dim != p)
      return fail(ErrorCode::DimensionMismatch, "group structure dim differs from p");
    const bool hierarchical = std::holds_alternative<HierL1L2>(problem.penalty) ||
                              std::holds_alternative<HierL1Linf>(problem.penalty);
    const StructureKind expected = hierarchical ? StructureKind::Tree : StructureKind::Partition;
    if (gs->kind != expected)
      return fail(ErrorCode::InvalidGroupStructure,
                  penalty_name(problem.penalty) + " requires a " +
                      (hierarchical ? "tree" : "partition") + " structure");
    if (auto err = validate_groups(*gs)) return err;
  }
  return std::nullopt;
}

void require_valid(const ProblemSpec& problem) {
  if (auto err = validate(problem)) throw Error(err->code, err->message);
}

double objective(const ProblemSpec& problem, std::span<const double> w) {
  if (w.size() != problem.p()) throw Error(ErrorCode::DimensionMismatch, "w has wrong length");
  const double f = loss_value(problem, w);
  if (auto* ball = std::get_if<L1Ball>(&problem.penalty)) {
    const double l1 = kernels::abs_sum(w);
    return l1 <= ball->radius * (1.0 + 1e-12) ? f : std::numeric_limits<double>::infinity();
  }
  if (problem.lambda == 0.0) return f;
  return f + problem.lambda * norm_value(problem.penalty, w);
}

}  // namespace sparseopt
