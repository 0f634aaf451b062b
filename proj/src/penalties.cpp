#include "sparseopt/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparseopt/kernels.hpp"

namespace sparseopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void gather(std::span<const double> full, const Group& g, Vector& out) {
  out.resize(g.indices.size());
  for (std::size_t k = 0; k < g.indices.size(); ++k) out[k] = full[g.indices[k]];
}

void scatter(std::span<const double> part, const Group& g, std::span<double> full) {
  for (std::size_t k = 0; k < g.indices.size(); ++k) full[g.indices[k]] = part[k];
}

double group_l2_norm(std::span<const double> w, const Group& g) {
  double s = 0.0;
  for (std::size_t j : g.indices) s += w[j] * w[j];
  return std::sqrt(s);
}

double group_l1_norm(std::span<const double> w, const Group& g) {
  double s = 0.0;
  for (std::size_t j : g.indices) s += std::fabs(w[j]);
  return s;
}

double group_linf_norm(std::span<const double> w, const Group& g) {
  double m = 0.0;
  for (std::size_t j : g.indices) m = std::max(m, std::fabs(w[j]));
  return m;
}

bool is_l2_variant(const PenaltySpec& penalty) {
  return std::holds_alternative<GroupL1L2>(penalty) || std::holds_alternative<HierL1L2>(penalty);
}

bool is_hierarchical(const PenaltySpec& penalty) {
  return std::holds_alternative<HierL1L2>(penalty) || std::holds_alternative<HierL1Linf>(penalty);
}

// Sum of weighted group norms with the given per-group norm.
template <class GroupNorm>
double weighted_group_sum(const GroupStructure& gs, std::span<const double> w, GroupNorm norm) {
  double s = 0.0;
  for (const Group& g : gs.groups) s += g.weight * norm(w, g);
  return s;
}

// Upper bound max_g |z_g|_{q'} / d_g, +inf when an uncovered coordinate is nonzero.
double max_over_groups(const GroupStructure& gs, std::span<const double> z, bool l2_variant,
                       bool check_coverage) {
  double m = 0.0;
  for (const Group& g : gs.groups) {
    const double dn = l2_variant ? group_l2_norm(z, g) : group_l1_norm(z, g);
    m = std::max(m, dn / g.weight);
  }
  if (check_coverage) {
    std::vector<char> covered(z.size(), 0);
    for (const Group& g : gs.groups)
      for (std::size_t j : g.indices) covered[j] = 1;
    for (std::size_t j = 0; j < z.size(); ++j)
      if (!covered[j] && z[j] != 0.0) return kInf;
  }
  return m;
}

void block_prox(std::span<double> v, double threshold, bool l2_variant) {
  if (l2_variant) {
    group_l2_shrink(v, threshold);
  } else {
    group_linf_shrink(v, threshold);
  }
}

void apply_groups(const GroupStructure& gs, std::span<double> w, double mu, bool l2_variant) {
  Vector buf;
  for (const Group& g : gs.groups) {
    gather(w, g, buf);
    block_prox(buf, mu * g.weight, l2_variant);
    scatter(buf, g, w);
  }
}

void check_length(std::span<const double> v, const GroupStructure& gs) {
  if (v.size() != gs.dim) throw Error(ErrorCode::DimensionMismatch, "vector length differs from group dim");
}

}  // namespace

void group_l2_shrink(std::span<double> v, double threshold) {
  const double nrm = std::sqrt(kernels::sum_sq(v));
  // 0/0 = 0: a zero block stays zero.
  if (nrm <= threshold || nrm == 0.0) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  kernels::scale(1.0 - threshold / nrm, v);
}

void group_linf_shrink(std::span<double> v, double threshold) {
  if (threshold <= 0.0) return;
  const Vector proj = project_l1_ball(v, threshold);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= proj[k];
}

double norm_value(const PenaltySpec& penalty, std::span<const double> w) {
  return std::visit(
      overloaded{
          [&](const L1&) { return kernels::abs_sum(w); },
          [&](const ElasticNet& en) { return kernels::abs_sum(w) + 0.5 * en.gamma * kernels::sum_sq(w); },
          [&](const GroupL1L2& p) { check_length(w, p.groups); return weighted_group_sum(p.groups, w, group_l2_norm); },
          [&](const GroupL1Linf& p) { check_length(w, p.groups); return weighted_group_sum(p.groups, w, group_linf_norm); },
          [&](const HierL1L2& p) { check_length(w, p.groups); return weighted_group_sum(p.groups, w, group_l2_norm); },
          [&](const HierL1Linf& p) { check_length(w, p.groups); return weighted_group_sum(p.groups, w, group_linf_norm); },
          [&](const L1Ball&) -> double {
            throw Error(ErrorCode::UnsupportedForConstraint, "L1Ball has no finite norm value");
          },
      },
      penalty);
}

double dual_norm_value(const PenaltySpec& penalty, std::span<const double> z) {
  return std::visit(
      overloaded{
          [&](const L1&) { return kernels::abs_max(z); },
          [&](const GroupL1L2& p) { check_length(z, p.groups); return max_over_groups(p.groups, z, true, false); },
          [&](const GroupL1Linf& p) { check_length(z, p.groups); return max_over_groups(p.groups, z, false, false); },
          [&](const HierL1L2& p) { check_length(z, p.groups); return max_over_groups(p.groups, z, true, true); },
          [&](const HierL1Linf& p) { check_length(z, p.groups); return max_over_groups(p.groups, z, false, true); },
          [&](const auto&) -> double {
            throw Error(ErrorCode::UnsupportedPenalty, "no dual norm exposed for " + penalty_name(penalty));
          },
      },
      penalty);
}

double tree_dual_norm(const PenaltySpec& penalty, std::span<const double> z) {
  if (!is_hierarchical(penalty)) return dual_norm_value(penalty, z);
  const GroupStructure& gs = *penalty_groups(penalty);
  const bool l2 = is_l2_variant(penalty);
  double hi = max_over_groups(gs, z, l2, true);
  if (!std::isfinite(hi) || hi == 0.0) return hi;
  Vector work(z.size());
  auto prox_vanishes = [&](double t) {
    std::copy(z.begin(), z.end(), work.begin());
    apply_groups(gs, work, t, l2);
    return std::all_of(work.begin(), work.end(), [](double x) { return x == 0.0; });
  };
  while (!prox_vanishes(hi)) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prox_vanishes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void prox_inplace(const PenaltySpec& penalty, std::span<double> u, double mu) {
  if (mu < 0.0) throw Error(ErrorCode::NonPositiveParameter, "prox scale mu must be >= 0");
  std::visit(overloaded{
                 [&](const L1&) {
                   if (mu > 0.0) kernels::soft_threshold(u, mu, u);
                 },
                 [&](const ElasticNet& en) {
                   if (mu == 0.0) return;
                   kernels::soft_threshold(u, mu, u);
                   kernels::scale(1.0 / (mu * en.gamma + 1.0), u);
                 },
                 [&](const GroupL1L2& p) {
                   check_length(u, p.groups);
                   if (mu > 0.0) apply_groups(p.groups, u, mu, true);
                 },
                 [&](const GroupL1Linf& p) {
                   check_length(u, p.groups);
                   if (mu > 0.0) apply_groups(p.groups, u, mu, false);
                 },
                 [&](const HierL1L2& p) {
                   check_length(u, p.groups);
                   if (mu > 0.0) apply_groups(p.groups, u, mu, true);
                 },
                 [&](const HierL1Linf& p) {
                   check_length(u, p.groups);
                   if (mu > 0.0) apply_groups(p.groups, u, mu, false);
                 },
                 [&](const L1Ball& b) {
                   const Vector w = project_l1_ball(u, b.radius);
                   std::copy(w.begin(), w.end(), u.begin());
                 },
             },
             penalty);
}

Vector prox(const PenaltySpec& penalty, std::span<const double> u, double mu) {
  Vector w(u.begin(), u.end());
  prox_inplace(penalty, w, mu);
  return w;
}

std::vector<Vector> hierarchical_prox_dual_parts(const PenaltySpec& penalty,
                                                 std::span<const double> u, double mu) {
  if (!is_hierarchical(penalty))
    throw Error(ErrorCode::UnsupportedPenalty, "dual parts are defined for hierarchical penalties");
  if (!(mu > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "mu must be > 0");
  const GroupStructure& gs = *penalty_groups(penalty);
  check_length(u, gs);
  const bool l2 = is_l2_variant(penalty);
  Vector w(u.begin(), u.end());
  Vector before;
  Vector after;
  std::vector<Vector> parts;
  parts.reserve(gs.groups.size());
  for (const Group& g : gs.groups) {
    gather(w, g, before);
    after = before;
    block_prox(after, mu * g.weight, l2);
    scatter(after, g, w);
    Vector part(u.size(), 0.0);
    for (std::size_t k = 0; k < g.indices.size(); ++k) part[g.indices[k]] = (before[k] - after[k]) / mu;
    parts.push_back(std::move(part));
  }
  return parts;
}

Vector project_l1_ball(std::span<const double> u, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "radius must be > 0");
  Vector w(u.begin(), u.end());
  if (kernels::abs_sum(u) <= radius) return w;
  Vector mags(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mags[i] = std::fabs(u[i]);
  std::stable_sort(mags.begin(), mags.end(), std::greater<>());
  // Largest k with mags[k-1] > (sum_{i<k} mags[i] - radius) / k.
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t k = 1; k <= mags.size(); ++k) {
    prefix += mags[k - 1];
    const double candidate = (prefix - radius) / static_cast<double>(k);
    if (mags[k - 1] > candidate) tau = candidate;
  }
  kernels::soft_threshold(u, tau, w);
  return w;
}

Vector project_group_l2_ball(std::span<const double> u, const GroupStructure& gs, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "radius must be > 0");
  if (gs.kind != StructureKind::Partition)
    throw Error(ErrorCode::InvalidGroupStructure, "group-ball projection needs a partition");
  check_length(u, gs);
  const std::size_t m = gs.groups.size();
  Vector norms(m);
  double total = 0.0;
  for (std::size_t g = 0; g < m; ++g) {
    norms[g] = group_l2_norm(u, gs.groups[g]);
    total += gs.groups[g].weight * norms[g];
  }
  Vector w(u.begin(), u.end());
  if (total <= radius) return w;
  // Weighted simplex projection: z_g = (a_g - tau d_g)_+ with sum d_g z_g = radius.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return norms[a] / gs.groups[a].weight > norms[b] / gs.groups[b].weight;
  });
  double sum_da = 0.0;
  double sum_dd = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Group& g = gs.groups[order[k]];
    sum_da += g.weight * norms[order[k]];
    sum_dd += g.weight * g.weight;
    const double candidate = (sum_da - radius) / sum_dd;
    if (norms[order[k]] / g.weight > candidate) tau = candidate;
  }
  for (std::size_t g = 0; g < m; ++g) {
    const Group& grp = gs.groups[g];
    const double z = std::max(norms[g] - tau * grp.weight, 0.0);
    const double factor = norms[g] > 0.0 ? z / norms[g] : 0.0;
    for (std::size_t j : grp.indices) w[j] = u[j] * factor;
  }
  return w;
}

Vector subgradient(const PenaltySpec& penalty, std::span<const double> w) {
  Vector s(w.size(), 0.0);
  auto sign = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  auto add_l2 = [&](const GroupStructure& gs) {
    for (const Group& g : gs.groups) {
      const double nrm = group_l2_norm(w, g);
      if (nrm == 0.0) continue;
      for (std::size_t j : g.indices) s[j] += g.weight * w[j] / nrm;
    }
  };
  auto add_linf = [&](const GroupStructure& gs) {
    for (const Group& g : gs.groups) {
      std::size_t best = g.indices.front();
      for (std::size_t j : g.indices)
        if (std::fabs(w[j]) > std::fabs(w[best])) best = j;
      if (w[best] != 0.0) s[best] += g.weight * sign(w[best]);
    }
  };
  std::visit(overloaded{
                 [&](const L1&) {
                   for (std::size_t j = 0; j < w.size(); ++j) s[j] = sign(w[j]);
                 },
                 [&](const ElasticNet& en) {
                   for (std::size_t j = 0; j < w.size(); ++j) s[j] = sign(w[j]) + en.gamma * w[j];
                 },
                 [&](const GroupL1L2& p) { add_l2(p.groups); },
                 [&](const HierL1L2& p) { add_l2(p.groups); },
                 [&](const GroupL1Linf& p) { add_linf(p.groups); },
                 [&](const HierL1Linf& p) { add_linf(p.groups); },
                 [&](const L1Ball&) {},
             },
             penalty);
  return s;
}

}  // namespace sparseopt
