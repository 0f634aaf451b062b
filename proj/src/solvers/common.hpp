#pragma once

#include <chrono>
#include <optional>
#include <span>

#include "sparseopt/core.hpp"
#include "sparseopt/duality.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// f, grad psi_n and grad f at a point, keyed by its margins X w.
struct SmoothState {
  Vector margins;   // n
  Vector residual;  // n, grad psi_n(margins)
  Vector grad;      // p
  double f = 0.0;
};

void evaluate(const ProblemSpec& problem, std::span<const double> w, SmoothState& state);
// Uses state.margins as given.
void evaluate_from_margins(const ProblemSpec& problem, SmoothState& state);
double evaluate_value(const ProblemSpec& problem, std::span<const double> margins);

// lambda * Omega(w), 0 or +inf for the l1-ball indicator.
double penalty_term(const ProblemSpec& problem, std::span<const double> w);

struct GapCheck {
  std::optional<double> gap;
  bool converged = false;
};

// Relative-gap test. For lambda == 0 the dual point collapses, so the test
// falls back to |grad f|_inf <= tol * max(1, |F|). The l1-ball constraint has
// no gap; `fixed_point_residual` (L |w_next - w|_inf) is used instead when given.
GapCheck check_gap(const ProblemSpec& problem, std::span<const double> w, const SmoothState& state,
                   double tol, std::optional<double> fixed_point_residual = std::nullopt);

Vector initial_point(const ProblemSpec& problem, const SolverConfig& config);
double initial_lipschitz(const ProblemSpec& problem, const SolverConfig& config);
inline bool gap_every_iteration(const ProblemSpec& problem) { return problem.p() <= 1000; }

class Recorder {
 public:
  explicit Recorder(const SolverConfig& config) : config_(config) {}

  void add(long long iteration, double objective, std::optional<double> gap) {
    trace.records.push_back({static_cast<int>(iteration), clock_.seconds(), objective, gap});
  }
  bool out_of_budget(long long iteration) const {
    return iteration >= config_.max_iter || clock_.seconds() >= config_.max_seconds;
  }
  double elapsed() const { return clock_.seconds(); }

  SolverTrace trace;

 private:
  const SolverConfig& config_;
  Stopwatch clock_;
};

void require_loss(const ProblemSpec& problem, Loss loss, std::string_view solver);

}  // namespace sparseopt::detail
