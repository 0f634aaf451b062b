#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sparseopt/bench.hpp"

namespace sparseopt::bench {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, const std::filesystem::path& file) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == EINVAL)
    throw Error(ErrorCode::IoError, "bad number '" + field + "' in " + file.string());
  return v;
}

const char* name_of(Correlation c) { return c == Correlation::Low ? "low" : "high"; }
const char* name_of(Regularization r) { return r == Regularization::Low ? "low" : "high"; }

}  // namespace

void write_trace_csv(const NamedTrace& trace, const std::filesystem::path& file, bool zero_time) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + file.string() + " for writing");
  out << "iter,time_s,objective,rel_objective,duality_gap\n";
  for (std::size_t k = 0; k < trace.trace.records.size(); ++k) {
    const TraceRecord& rec = trace.trace.records[k];
    out << rec.iteration << ',' << format_double(zero_time ? 0.0 : rec.elapsed_seconds) << ','
        << format_double(rec.objective) << ',' << format_double(trace.rel_objective[k]) << ',';
    if (rec.duality_gap) out << format_double(*rec.duality_gap);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + file.string());
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "iter,time_s,objective,rel_objective,duality_gap")
    throw Error(ErrorCode::IoError, "unexpected header in " + file.string());
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 5) throw Error(ErrorCode::IoError, "expected 5 fields in " + file.string());
    TraceRow row;
    row.iter = static_cast<int>(parse_double(fields[0], file));
    row.time_s = parse_double(fields[1], file);
    row.objective = parse_double(fields[2], file);
    row.rel_objective = parse_double(fields[3], file);
    if (!fields[4].empty()) row.duality_gap = parse_double(fields[4], file);
    rows.push_back(row);
  }
  return rows;
}

void write_traces(const BenchmarkResult& result, const std::filesystem::path& dir, bool zero_time) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json manifest;
  const ScenarioSpec& sc = result.scenario;
  manifest["scenario"] = {{"n", sc.n},
                          {"p", sc.p},
                          {"correlation", name_of(sc.correlation)},
                          {"regularization", name_of(sc.regularization)},
                          {"noise_scale", sc.noise_scale},
                          {"base_seed", sc.seed}};
  manifest["tol"] = result.tol;
  manifest["budget_seconds"] = result.budget_seconds;
  manifest["target_rel_objective"] = result.target;
  manifest["solvers"] = result.solvers;
  manifest["timing"] = !zero_time;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const SeedRun& run : result.runs) {
    const std::filesystem::path sub = dir / ("seed_" + std::to_string(run.seed));
    std::filesystem::create_directories(sub, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + sub.string() + ": " + ec.message());
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const NamedTrace& t : run.traces) {
      const std::filesystem::path file = sub / (t.solver + ".csv");
      write_trace_csv(t, file, zero_time);
      files.push_back({{"solver", t.solver},
                       {"file", (std::filesystem::path("seed_" + std::to_string(run.seed)) / (t.solver + ".csv")).generic_string()},
                       {"converged", t.trace.converged},
                       {"records", t.trace.records.size()}});
    }
    runs.push_back({{"seed", run.seed},
                    {"lambda", format_double(run.lambda)},
                    {"best_objective", format_double(run.best_objective)},
                    {"traces", files}});
  }
  manifest["runs"] = runs;
  if (!zero_time) {
    nlohmann::ordered_json medians = nlohmann::ordered_json::object();
    for (std::size_t s = 0; s < result.solvers.size(); ++s) {
      const auto& m = result.median_time_to_target[s];
      medians[result.solvers[s]] = m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json(nullptr);
    }
    manifest["median_time_to_target_s"] = medians;
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace sparseopt::bench
