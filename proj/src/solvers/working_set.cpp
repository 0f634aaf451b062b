#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "sparseopt/kernels.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

struct Unit {
  std::vector<std::size_t> indices;
  double weight = 1.0;
};

enum class UnitNorm { Abs, L2, L1 };

double unit_score(const Unit& unit, std::span<const double> grad, UnitNorm norm) {
  double s = 0.0;
  switch (norm) {
    case UnitNorm::Abs:
      s = std::fabs(grad[unit.indices[0]]);
      break;
    case UnitNorm::L2:
      for (std::size_t j : unit.indices) s += grad[j] * grad[j];
      s = std::sqrt(s);
      break;
    case UnitNorm::L1:
      for (std::size_t j : unit.indices) s += std::fabs(grad[j]);
      break;
  }
  return s / unit.weight;
}

// Restricted problem on the columns of the selected units (w_{J^c} = 0).
ProblemSpec restrict_problem(const ProblemSpec& problem, const std::vector<Unit>& units,
                             const std::vector<std::size_t>& selected, std::vector<std::size_t>& columns) {
  std::vector<std::size_t> chosen = selected;
  std::sort(chosen.begin(), chosen.end());
  columns.clear();
  for (std::size_t u : chosen)
    columns.insert(columns.end(), units[u].indices.begin(), units[u].indices.end());
  std::sort(columns.begin(), columns.end());
  std::vector<std::size_t> position(problem.p(), 0);
  for (std::size_t k = 0; k < columns.size(); ++k) position[columns[k]] = k;

  ProblemSpec sub;
  sub.loss = problem.loss;
  sub.X = problem.X.select_columns(columns);
  sub.y = problem.y;
  sub.lambda = problem.lambda;
  if (std::holds_alternative<L1>(problem.penalty)) {
    sub.penalty = L1{};
    return sub;
  }
  GroupStructure gs;
  gs.kind = StructureKind::Partition;
  gs.dim = columns.size();
  for (std::size_t u : chosen) {
    Group g;
    g.weight = units[u].weight;
    for (std::size_t j : units[u].indices) g.indices.push_back(position[j]);
    std::sort(g.indices.begin(), g.indices.end());
    gs.groups.push_back(std::move(g));
  }
  if (std::holds_alternative<GroupL1L2>(problem.penalty)) {
    sub.penalty = GroupL1L2{std::move(gs)};
  } else {
    sub.penalty = GroupL1Linf{std::move(gs)};
  }
  return sub;
}

}  // namespace

SolverTrace solve_working_set(const ProblemSpec& problem, const SolverConfig& config) {
  require_valid(problem);
  std::vector<Unit> units;
  UnitNorm norm;
  if (std::holds_alternative<L1>(problem.penalty)) {
    norm = UnitNorm::Abs;
    for (std::size_t j = 0; j < problem.p(); ++j) units.push_back({{j}, 1.0});
  } else if (const auto* g2 = std::get_if<GroupL1L2>(&problem.penalty)) {
    norm = UnitNorm::L2;
    for (const Group& g : g2->groups.groups) units.push_back({g.indices, g.weight});
  } else if (const auto* gi = std::get_if<GroupL1Linf>(&problem.penalty)) {
    norm = UnitNorm::L1;
    for (const Group& g : gi->groups.groups) units.push_back({g.indices, g.weight});
  } else {
    throw Error(ErrorCode::UnsupportedPenalty, "working set supports L1, GroupL1L2 and GroupL1Linf");
  }
  if (config.inner_solver == SolverId::WorkingSet)
    throw Error(ErrorCode::UnknownSolver, "working set cannot nest itself");

  detail::Recorder rec(config);
  Vector w = detail::initial_point(problem, config);
  detail::SmoothState state;
  detail::evaluate(problem, w, state);
  auto check = detail::check_gap(problem, w, state, config.tol);
  rec.add(0, state.f + detail::penalty_term(problem, w), check.gap);

  std::vector<char> in_set(units.size(), 0);
  std::vector<std::size_t> selected;
  for (std::size_t u = 0; u < units.size(); ++u) {
    bool nonzero = false;
    for (std::size_t j : units[u].indices) nonzero = nonzero || w[j] != 0.0;
    if (nonzero) {
      in_set[u] = 1;
      selected.push_back(u);
    }
  }

  const double threshold = problem.lambda * (1.0 + config.tol);
  double inner_tol = config.tol / 10.0;
  bool converged = false;
  std::vector<std::size_t> columns;
  std::vector<std::pair<double, std::size_t>> violators;
  for (long long round = 1; !rec.out_of_budget(round - 1); ++round) {
    violators.clear();
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (in_set[u]) continue;
      const double score = unit_score(units[u], state.grad, norm);
      if (score > threshold) violators.emplace_back(score, u);
    }
    if (violators.empty()) {
      if (check.converged) {
        converged = true;
        break;
      }
      if (selected.empty() || inner_tol < 1e-16) break;
      inner_tol /= 10.0;
    } else {
      const std::size_t take = std::min(std::max<std::size_t>(config.working_set_batch, 1), violators.size());
      std::partial_sort(violators.begin(), violators.begin() + static_cast<std::ptrdiff_t>(take), violators.end(),
                        [](const auto& a, const auto& b) {
                          return a.first > b.first || (a.first == b.first && a.second < b.second);
                        });
      for (std::size_t k = 0; k < take; ++k) {
        in_set[violators[k].second] = 1;
        selected.push_back(violators[k].second);
      }
    }

    const ProblemSpec sub = restrict_problem(problem, units, selected, columns);
    SolverConfig inner = config;
    inner.tol = inner_tol;
    inner.max_seconds = std::max(0.0, config.max_seconds - rec.elapsed());
    Vector start(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) start[k] = w[columns[k]];
    inner.initial_w = std::move(start);
    const SolverTrace sub_trace = solve(sub, config.inner_solver, inner);
    rec.trace.stats.inner_iterations += static_cast<long long>(sub_trace.records.size());
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < columns.size(); ++k) w[columns[k]] = sub_trace.final_w[k];

    detail::evaluate(problem, w, state);
    check = detail::check_gap(problem, w, state, config.tol);
    rec.add(round, state.f + detail::penalty_term(problem, w), check.gap);
  }
  rec.trace.final_w = std::move(w);
  rec.trace.converged = converged;
  return std::move(rec.trace);
}

}  // namespace sparseopt
