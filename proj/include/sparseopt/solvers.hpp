#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sparseopt/core.hpp"

namespace sparseopt {

// Modified Armijo rule: accept alpha = alpha0 * beta^k once
//   F(w + alpha d) - F(w) <= sigma * alpha * Delta,
//   Delta = g^T d + gamma * H |d|^2 + lambda (Omega(w + d) - Omega(w)).
struct ArmijoParams {
  double sigma = 0.1;
  double gamma = 0.5;
  double beta = 0.5;
  double alpha0 = 1.0;
  int max_steps = 60;
};

struct EpsilonSchedule {
  double initial = 1e-2;
  double shrink = 0.1;
  double floor = 1e-8;
};

// Subgradient step a / (t + b)^exponent at iteration t >= 1.
struct SubgradientStep {
  double a = 1.0;
  double b = 0.0;
  double exponent = 0.5;
};

enum class SolverId { Subgradient, Ista, Fista, Cd, CdSmooth, Bcd, ReweightedL2, WorkingSet, Homotopy };

struct SolverConfig {
  double tol = 1e-6;  // relative duality gap
  long long max_iter = 100000;
  double max_seconds = 600.0;
  double line_search_factor = 2.0;
  // Initial Lipschitz estimate; <= 0 selects max_j |X_j|^2 / n.
  double l0_init = 0.0;
  unsigned long long seed = 0;
  ArmijoParams armijo;
  EpsilonSchedule epsilon_schedule;
  SubgradientStep subgradient_step;
  // CD keeps X^T X in memory when p is at most this.
  std::size_t gram_memory_budget = 4096;
  // Working set: units admitted per round and the restricted-problem solver.
  std::size_t working_set_batch = 1;
  SolverId inner_solver = SolverId::Fista;
  // Warm start; zero when absent.
  std::optional<Vector> initial_w;
};

std::string_view solver_name(SolverId id);
/// Accepts the CLI names: sg, ista, fista, cd, cd-smooth, bcd, rel2, ws, homotopy.
SolverId parse_solver_id(std::string_view name);

SolverTrace solve_subgradient(const ProblemSpec& problem, const SolverConfig& config);
SolverTrace solve_ista(const ProblemSpec& problem, const SolverConfig& config);
SolverTrace solve_fista(const ProblemSpec& problem, const SolverConfig& config);
/// Square loss with L1 or ElasticNet.
SolverTrace solve_cd(const ProblemSpec& problem, const SolverConfig& config);
/// Logistic loss with L1.
SolverTrace solve_cd_smooth(const ProblemSpec& problem, const SolverConfig& config);
/// GroupL1L2 / GroupL1Linf over a partition. The structure comes from the penalty.
SolverTrace solve_bcd(const ProblemSpec& problem, const SolverConfig& config);
/// Square loss with L1 or GroupL1L2.
SolverTrace solve_reweighted_l2(const ProblemSpec& problem, const SolverConfig& config);
/// L1, GroupL1L2 or GroupL1Linf; config.inner_solver runs the restricted problems.
SolverTrace solve_working_set(const ProblemSpec& problem, const SolverConfig& config);

/// Runs the named solver (homotopy included).
SolverTrace solve(const ProblemSpec& problem, SolverId id, const SolverConfig& config);

/// Grid search over a in {1e-3, ..., 10} and b in {1e2, 1e3, 1e4} with
/// exponent 1, keeping the pair with the lowest best objective after
/// `iterations` steps.
SubgradientStep select_subgradient_step(const ProblemSpec& problem, int iterations = 500);

}  // namespace sparseopt
