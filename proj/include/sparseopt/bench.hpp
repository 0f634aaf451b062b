#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sparseopt/core.hpp"
#include "sparseopt/solvers.hpp"

namespace sparseopt::bench {

enum class Correlation { Low, High };
enum class Regularization { Low, High };

struct ScenarioSpec {
  std::size_t n = 200;
  std::size_t p = 200;
  Correlation correlation = Correlation::Low;
  Regularization regularization = Regularization::High;
  std::uint64_t seed = 0;
  double noise_scale = 0.01;
};

/// n = p = 200.
ScenarioSpec small_scenario(Correlation corr, Regularization reg, std::uint64_t seed);
/// n = 2000, p = 10000.
ScenarioSpec medium_scenario(Correlation corr, Regularization reg, std::uint64_t seed);

struct Scenario {
  DenseMatrix X;
  Vector y;
  Vector w_true;
  double lambda_suggested = 0.0;
  double rho = 0.0;  // AR(1) coefficient across columns, 0 for the low-correlation design
  std::size_t target_support = 0;
};

/// Deterministic in the spec: mt19937_64 substreams seeded from
/// (seed low word, seed high word, stream) with streams 1 = X, 2 = w_true,
/// 3 = noise.
Scenario generate_scenario(const ScenarioSpec& spec);

/// Mean |corr(X_i, X_j)| over all column pairs when p <= 400, otherwise over
/// 20000 pairs drawn with the given seed.
double mean_abs_correlation(const DenseMatrix& X, std::uint64_t seed = 7);

/// AR(1) coefficient whose design has 8x the mean absolute correlation of
/// the i.i.d. design, calibrated once per (n, p) on fixed random numbers.
double calibrated_rho(std::size_t n, std::size_t p);

/// Lambda for which the Lasso has about `target` nonzeros (bisection in log lambda).
double suggest_lambda(const DenseMatrix& X, std::span<const double> y, std::size_t target);

struct NamedTrace {
  std::string solver;
  SolverTrace trace;
  Vector rel_objective;  // (F_t - F_best) / |F_best| per record
};

struct SeedRun {
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double best_objective = 0.0;
  std::vector<NamedTrace> traces;
};

struct BenchmarkResult {
  ScenarioSpec scenario;
  double tol = 0.0;
  double budget_seconds = 0.0;
  double target = 1e-6;
  std::vector<std::string> solvers;
  std::vector<SeedRun> runs;
  // Median over seeds of the first time each solver reaches rel_objective <= target.
  std::vector<std::optional<double>> median_time_to_target;
};

struct BenchmarkOptions {
  double tol = 1e-6;
  double budget_seconds = 600.0;
  int repeats = 5;
  double target = 1e-6;
};

/// Runs every solver on the scenario for seeds seed, seed+1, ..., seed+repeats-1.
BenchmarkResult run_benchmark(const ScenarioSpec& scenario, const std::vector<SolverId>& solvers,
                              const BenchmarkOptions& options);

/// Seconds at which the trace first reaches rel_objective <= target.
std::optional<double> time_to_target(const NamedTrace& trace, double target);

/// Writes DIR/seed_<s>/<solver>.csv for every run and DIR/manifest.json.
/// With zero_time, time_s is written as 0 so output is reproducible.
void write_traces(const BenchmarkResult& result, const std::filesystem::path& dir, bool zero_time);

struct TraceRow {
  int iter = 0;
  double time_s = 0.0;
  double objective = 0.0;
  double rel_objective = 0.0;
  std::optional<double> duality_gap;
};

void write_trace_csv(const NamedTrace& trace, const std::filesystem::path& file, bool zero_time);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& file);

}  // namespace sparseopt::bench
