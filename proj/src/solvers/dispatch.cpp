#include <array>
#include <string>
#include <utility>

#include "sparseopt/homotopy.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt {
namespace {

constexpr std::array<std::pair<SolverId, std::string_view>, 9> kNames{{
    {SolverId::Subgradient, "sg"},
    {SolverId::Ista, "ista"},
    {SolverId::Fista, "fista"},
    {SolverId::Cd, "cd"},
    {SolverId::CdSmooth, "cd-smooth"},
    {SolverId::Bcd, "bcd"},
    {SolverId::ReweightedL2, "rel2"},
    {SolverId::WorkingSet, "ws"},
    {SolverId::Homotopy, "homotopy"},
}};

}  // namespace

std::string_view solver_name(SolverId id) {
  for (const auto& [key, name] : kNames)
    if (key == id) return name;
  return "unknown";
}

SolverId parse_solver_id(std::string_view name) {
  for (const auto& [key, label] : kNames)
    if (label == name) return key;
  throw Error(ErrorCode::UnknownSolver, "unknown solver '" + std::string(name) + "'");
}

SolverTrace solve(const ProblemSpec& problem, SolverId id, const SolverConfig& config) {
  if (!(config.tol > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "tol must be > 0");
  if (!(config.line_search_factor > 1.0))
    throw Error(ErrorCode::NonPositiveParameter, "line_search_factor must be > 1");
  switch (id) {
    case SolverId::Subgradient: return solve_subgradient(problem, config);
    case SolverId::Ista: return solve_ista(problem, config);
    case SolverId::Fista: return solve_fista(problem, config);
    case SolverId::Cd: return solve_cd(problem, config);
    case SolverId::CdSmooth: return solve_cd_smooth(problem, config);
    case SolverId::Bcd: return solve_bcd(problem, config);
    case SolverId::ReweightedL2: return solve_reweighted_l2(problem, config);
    case SolverId::WorkingSet: return solve_working_set(problem, config);
    case SolverId::Homotopy: return solve_homotopy(problem, config);
  }
  throw Error(ErrorCode::UnknownSolver, "unknown solver id");
}

}  // namespace sparseopt
