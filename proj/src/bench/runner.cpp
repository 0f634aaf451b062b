#include <algorithm>
#include <cmath>
#include <limits>

#include "sparseopt/bench.hpp"

namespace sparseopt::bench {

std::optional<double> time_to_target(const NamedTrace& trace, double target) {
  for (std::size_t k = 0; k < trace.rel_objective.size(); ++k)
    if (trace.rel_objective[k] <= target) return trace.trace.records[k].elapsed_seconds;
  return std::nullopt;
}

BenchmarkResult run_benchmark(const ScenarioSpec& scenario, const std::vector<SolverId>& solvers,
                              const BenchmarkOptions& options) {
  if (options.repeats < 1) throw Error(ErrorCode::NonPositiveParameter, "repeats must be >= 1");
  BenchmarkResult result;
  result.scenario = scenario;
  result.tol = options.tol;
  result.budget_seconds = options.budget_seconds;
  result.target = options.target;
  for (SolverId id : solvers) result.solvers.emplace_back(solver_name(id));

  for (int r = 0; r < options.repeats; ++r) {
    ScenarioSpec spec = scenario;
    spec.seed = scenario.seed + static_cast<std::uint64_t>(r);
    const Scenario sc = generate_scenario(spec);
    ProblemSpec problem;
    problem.loss = Loss::Square;
    problem.X = sc.X;
    problem.y = sc.y;
    problem.lambda = sc.lambda_suggested;
    problem.penalty = L1{};

    SeedRun run;
    run.seed = spec.seed;
    run.lambda = problem.lambda;
    for (SolverId id : solvers) {
      SolverConfig config;
      config.tol = options.tol;
      config.max_seconds = options.budget_seconds;
      if (id == SolverId::Subgradient) config.subgradient_step = select_subgradient_step(problem);
      run.traces.push_back({std::string(solver_name(id)), solve(problem, id, config), {}});
    }
    run.best_objective = std::numeric_limits<double>::infinity();
    for (const NamedTrace& t : run.traces)
      run.best_objective = std::min(run.best_objective, objective(problem, t.trace.final_w));
    const double denom = std::max(std::fabs(run.best_objective), std::numeric_limits<double>::min());
    for (NamedTrace& t : run.traces) {
      t.rel_objective.reserve(t.trace.records.size());
      for (const TraceRecord& rec : t.trace.records)
        t.rel_objective.push_back((rec.objective - run.best_objective) / denom);
    }
    result.runs.push_back(std::move(run));
  }

  for (std::size_t s = 0; s < solvers.size(); ++s) {
    std::vector<double> times;
    for (const SeedRun& run : result.runs) {
      const auto t = time_to_target(run.traces[s], options.target);
      times.push_back(t.value_or(std::numeric_limits<double>::infinity()));
    }
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size();
    const double median = m % 2 == 1 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
    result.median_time_to_target.push_back(std::isfinite(median) ? std::optional<double>(median) : std::nullopt);
  }
  return result;
}

}  // namespace sparseopt::bench
