// sparseopt-solve: solve one problem read from CSV files.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparseopt/duality.hpp"
#include "sparseopt/solvers.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

using sparseopt::Error;
using sparseopt::ErrorCode;

std::vector<std::vector<double>> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
      } catch (const std::exception&) {
        throw Error(ErrorCode::IoError, "bad number '" + field + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// One group per line: "weight: i1 i2 ...".
sparseopt::GroupStructure read_groups(const std::string& path, std::size_t p, sparseopt::StructureKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  sparseopt::GroupStructure gs;
  gs.kind = kind;
  gs.dim = p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::IoError, "missing ':' in group line: " + line);
    sparseopt::Group g;
    try {
      g.weight = std::stod(line.substr(0, colon));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoError, "bad group weight in line: " + line);
    }
    std::stringstream ss(line.substr(colon + 1));
    long long idx;
    while (ss >> idx) {
      if (idx < 0) throw Error(ErrorCode::InvalidGroupStructure, "negative index in line: " + line);
      g.indices.push_back(static_cast<std::size_t>(idx));
    }
    if (!ss.eof()) throw Error(ErrorCode::IoError, "bad index in line: " + line);
    gs.groups.push_back(std::move(g));
  }
  return gs;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sparseopt;
  CLI::App app{"Solve min f(w) + lambda Omega(w) for data in CSV files"};
  std::string x_path;
  std::string y_path;
  std::string loss_name = "square";
  std::string penalty_name_arg = "l1";
  std::string groups_path;
  std::string solver_arg;
  std::string out_path;
  double lambda = 0.0;
  double gamma = 1.0;
  double tol = 1e-6;
  long long max_iter = 100000;
  app.add_option("--x", x_path, "design matrix, one comma-separated row per line")->required();
  app.add_option("--y", y_path, "response, one value per line")->required();
  app.add_option("--loss", loss_name)->check(CLI::IsMember({"square", "logistic"}));
  app.add_option("--penalty", penalty_name_arg)->check(CLI::IsMember({"l1", "en", "gl2", "glinf", "hier"}));
  app.add_option("--lambda", lambda)->required();
  app.add_option("--gamma", gamma, "elastic-net weight of (1/2)|w|^2");
  app.add_option("--groups", groups_path, "group file, lines of 'weight: i1 i2 ...'");
  app.add_option("--solver", solver_arg, "default: cd / cd-smooth / bcd / fista by problem type");
  app.add_option("--tol", tol, "relative duality gap")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write w, one value per line");
  std::string q = "2";
  app.add_option("--q", q, "group norm for --penalty hier: 2 or inf")->check(CLI::IsMember({"2", "inf"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  ProblemSpec problem;
  SolverId solver = SolverId::Fista;
  try {
    problem.loss = loss_name == "square" ? Loss::Square : Loss::Logistic;
    problem.X = DenseMatrix::from_rows(read_numbers(x_path));
    for (const auto& row : read_numbers(y_path)) problem.y.insert(problem.y.end(), row.begin(), row.end());
    problem.lambda = lambda;
    const std::size_t p = problem.p();
    const bool grouped = penalty_name_arg == "gl2" || penalty_name_arg == "glinf" || penalty_name_arg == "hier";
    if (grouped && groups_path.empty()) throw Error(ErrorCode::InvalidGroupStructure, "--groups is required");
    if (penalty_name_arg == "l1") {
      problem.penalty = L1{};
    } else if (penalty_name_arg == "en") {
      problem.penalty = ElasticNet{gamma};
    } else if (penalty_name_arg == "gl2") {
      problem.penalty = GroupL1L2{read_groups(groups_path, p, StructureKind::Partition)};
    } else if (penalty_name_arg == "glinf") {
      problem.penalty = GroupL1Linf{read_groups(groups_path, p, StructureKind::Partition)};
    } else {
      GroupStructure tree = order_tree(read_groups(groups_path, p, StructureKind::Tree));
      if (q == "2") {
        problem.penalty = HierL1L2{std::move(tree)};
      } else {
        problem.penalty = HierL1Linf{std::move(tree)};
      }
    }
    if (auto err = validate(problem)) {
      std::cerr << "error: " << to_string(err->code) << ": " << err->message << '\n';
      return kExitValidation;
    }
    if (!solver_arg.empty()) {
      solver = parse_solver_id(solver_arg);
    } else if (penalty_name_arg == "gl2" || penalty_name_arg == "glinf") {
      solver = SolverId::Bcd;
    } else if (penalty_name_arg == "l1" || penalty_name_arg == "en") {
      solver = problem.loss == Loss::Square ? SolverId::Cd
               : penalty_name_arg == "l1"  ? SolverId::CdSmooth
                                           : SolverId::Fista;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    SolverConfig config;
    config.tol = tol;
    config.max_iter = max_iter;
    const SolverTrace trace = solve(problem, solver, config);
    const double F = objective(problem, trace.final_w);
    std::size_t nnz = 0;
    for (double v : trace.final_w) nnz += v != 0.0;
    std::printf("solver      %s\n", std::string(solver_name(solver)).c_str());
    std::printf("objective   %.17g\n", F);
    if (!trace.records.empty() && trace.records.back().duality_gap)
      std::printf("gap         %.6e\n", *trace.records.back().duality_gap);
    std::printf("converged   %s\n", trace.converged ? "yes" : "no");
    std::printf("iterations  %d\n", trace.records.empty() ? 0 : trace.records.back().iteration);
    std::printf("nnz         %zu\n", nnz);
    if (!out_path.empty()) {
      std::FILE* f = std::fopen(out_path.c_str(), "w");
      if (!f) throw Error(ErrorCode::IoError, "cannot open " + out_path);
      for (double v : trace.final_w) std::fprintf(f, "%.17g\n", v);
      std::fclose(f);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
