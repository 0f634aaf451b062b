#pragma once

#include <span>
#include <vector>

#include "sparseopt/core.hpp"

namespace sparseopt {

struct ProxRequest {
  Vector u;
  double mu = 0.0;  // >= 0; lambda / L inside proximal solvers
};

/// Omega(w). Throws UnsupportedForConstraint for L1Ball.
double norm_value(const PenaltySpec& penalty, std::span<const double> w);

/// Omega*(z) for L1 and the partition group norms.
///
/// For the hierarchical variants this returns max_g |z_g|_{q'} / d_g, which
/// upper-bounds the true dual norm of the overlapping tree norm (+inf when a
/// coordinate outside every group is nonzero). Use tree_dual_norm for the
/// exact value. Throws UnsupportedPenalty for ElasticNet and L1Ball.
double dual_norm_value(const PenaltySpec& penalty, std::span<const double> z);

/// Exact dual norm of a hierarchical penalty: the smallest t with
/// Prox_{t Omega}(z) = 0, located by bisection on the composed prox. The
/// returned value is the upper end of the final bracket.
double tree_dual_norm(const PenaltySpec& penalty, std::span<const double> z);

/// argmin_w 1/2 |u - w|^2 + mu Omega(w); Euclidean projection for L1Ball.
Vector prox(const PenaltySpec& penalty, std::span<const double> u, double mu);
inline Vector prox(const PenaltySpec& penalty, const ProxRequest& req) {
  return prox(penalty, req.u, req.mu);
}
void prox_inplace(const PenaltySpec& penalty, std::span<double> u, double mu);

/// Per-group dual pieces produced by the composed hierarchical prox:
/// (u - prox(u)) / mu == sum_g parts[g], each part supported on group g with
/// |parts[g]|_{q'} <= d_g. Requires mu > 0 and a hierarchical penalty.
std::vector<Vector> hierarchical_prox_dual_parts(const PenaltySpec& penalty,
                                                 std::span<const double> u, double mu);

/// Euclidean projection onto {w : |w|_1 <= radius}. Sort-and-threshold.
Vector project_l1_ball(std::span<const double> u, double radius);

/// Euclidean projection onto {w : sum_g d_g |w_g|_2 <= radius} for a
/// partition, through a weighted simplex projection of the group norms.
Vector project_group_l2_ball(std::span<const double> u, const GroupStructure& gs, double radius);

/// One element of the subdifferential of Omega at w (zero for L1Ball).
Vector subgradient(const PenaltySpec& penalty, std::span<const double> w);

// Single-block operators shared by the block solvers.
void group_l2_shrink(std::span<double> v, double threshold);
void group_linf_shrink(std::span<double> v, double threshold);

}  // namespace sparseopt
