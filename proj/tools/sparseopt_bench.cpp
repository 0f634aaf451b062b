// sparseopt-bench: synthetic Lasso benchmark, one CSV trace per solver and seed.
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparseopt/bench.hpp"
#include "sparseopt/solvers.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sparseopt;
  CLI::App app{"Synthetic sparse-regression solver benchmark"};
  std::string scale = "small";
  std::string corr = "low";
  std::string reg = "high";
  std::string solver_list = "fista,ista,cd,sg,rel2,homotopy";
  double tol = 1e-6;
  double budget = 600.0;
  std::uint64_t seed = 0;
  int repeats = 5;
  std::string out_dir;
  bool no_timing = false;
  app.add_option("--scenario", scale, "small (n=p=200) or medium (n=2000, p=10000)")
      ->check(CLI::IsMember({"small", "medium"}));
  app.add_option("--corr", corr, "column correlation level")->check(CLI::IsMember({"low", "high"}));
  app.add_option("--reg", reg, "regularization level")->check(CLI::IsMember({"low", "high"}));
  app.add_option("--solvers", solver_list, "comma-separated: fista,ista,cd,sg,rel2,homotopy,ws,bcd,cd-smooth");
  app.add_option("--tol", tol, "relative duality gap")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "seconds per solver run")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "base seed; runs use seed..seed+repeats-1");
  app.add_option("--repeats", repeats, "number of seeds")->check(CLI::Range(1, 1000));
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--no-timing", no_timing, "write time_s as 0 for byte-reproducible output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  std::vector<SolverId> solvers;
  try {
    for (const std::string& name : split_list(solver_list)) solvers.push_back(parse_solver_id(name));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (solvers.empty()) {
    std::cerr << "error: no solvers given\n";
    return kExitValidation;
  }

  const auto c = corr == "low" ? bench::Correlation::Low : bench::Correlation::High;
  const auto r = reg == "low" ? bench::Regularization::Low : bench::Regularization::High;
  const bench::ScenarioSpec spec =
      scale == "small" ? bench::small_scenario(c, r, seed) : bench::medium_scenario(c, r, seed);
  bench::BenchmarkOptions options;
  options.tol = tol;
  options.budget_seconds = budget;
  options.repeats = repeats;

  try {
    const bench::BenchmarkResult result = bench::run_benchmark(spec, solvers, options);
    bench::write_traces(result, out_dir, no_timing);
    for (std::size_t s = 0; s < result.solvers.size(); ++s) {
      std::printf("%-10s", result.solvers[s].c_str());
      if (no_timing) {
        std::printf(" done\n");
      } else if (const auto& m = result.median_time_to_target[s]) {
        std::printf(" median time to rel. objective %.0e: %.6f s\n", result.target, *m);
      } else {
        std::printf(" median time to rel. objective %.0e: not reached\n", result.target);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
