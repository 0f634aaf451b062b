// Acceptance suite: one line per criterion, nonzero exit on any hard failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparseopt/bench.hpp"
#include "sparseopt/duality.hpp"
#include "sparseopt/greedy.hpp"
#include "sparseopt/homotopy.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"
#include "sparseopt/solvers.hpp"

namespace {

using namespace sparseopt;
using fixtures::inf_distance;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  bool soft = false;  // failure only warns
  std::string detail;
  double limit_seconds = 0.0;  // 0: no runtime bound
};

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<PenaltySpec> penalty_family(std::size_t p, std::mt19937_64& rng) {
  const GroupStructure part = oracle::random_partition(p, rng);
  const GroupStructure tree = oracle::random_tree(p, 4, rng);
  return {L1{}, ElasticNet{0.7}, GroupL1L2{part}, GroupL1Linf{part}, HierL1L2{tree}, HierL1Linf{tree}, L1Ball{1.0}};
}

// Dual-norm and alignment certificate of w = prox(u, mu).
bool prox_certificate(const PenaltySpec& pen, std::span<const double> u, std::span<const double> w, double mu) {
  constexpr double tol = 1e-8;
  const std::size_t p = u.size();
  Vector z(p);
  for (std::size_t j = 0; j < p; ++j) z[j] = (u[j] - w[j]) / mu;
  if (const auto* ball = std::get_if<L1Ball>(&pen)) {
    // Normal cone of the ball: |w|_1 <= r and <u - w, w> = r |u - w|_inf.
    double l1 = 0.0, zi = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      l1 += std::fabs(w[j]);
      zi = std::max(zi, std::fabs(u[j] - w[j]));
    }
    if (l1 > ball->radius * (1.0 + 1e-12)) return false;
    return dot(u, w) - dot(w, w) >= ball->radius * zi - tol;
  }
  if (const auto* en = std::get_if<ElasticNet>(&pen)) {
    // (u - w)/mu - gamma w lies in the l1 subdifferential.
    for (std::size_t j = 0; j < p; ++j) z[j] -= en->gamma * w[j];
    double zi = 0.0, l1 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      zi = std::max(zi, std::fabs(z[j]));
      l1 += std::fabs(w[j]);
    }
    return zi <= 1.0 + tol && dot(z, w) >= l1 - tol;
  }
  if (std::holds_alternative<HierL1L2>(pen) || std::holds_alternative<HierL1Linf>(pen)) {
    const bool l2 = std::holds_alternative<HierL1L2>(pen);
    const GroupStructure& gs = *penalty_groups(pen);
    const auto parts = hierarchical_prox_dual_parts(pen, u, mu);
    Vector sum(p, 0.0);
    double align = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      double q = 0.0;
      for (std::size_t j : gs.groups[k].indices) q += l2 ? parts[k][j] * parts[k][j] : std::fabs(parts[k][j]);
      if ((l2 ? std::sqrt(q) : q) > gs.groups[k].weight * (1.0 + tol)) return false;
      for (std::size_t j = 0; j < p; ++j) sum[j] += parts[k][j];
      align += dot(parts[k], w);
    }
    for (std::size_t j = 0; j < p; ++j)
      if (std::fabs(sum[j] - z[j]) > tol * std::max(1.0, std::fabs(z[j]))) return false;
    return align >= norm_value(pen, w) - tol;
  }
  return dual_norm_value(pen, z) <= 1.0 + tol && dot(z, w) >= norm_value(pen, w) - tol;
}

Vector prox_reference(const PenaltySpec& pen, std::span<const double> u, double mu) {
  if (const auto* ball = std::get_if<L1Ball>(&pen)) return oracle::project_l1_ball_enumerate(u, ball->radius);
  return oracle::prox_subgradient(pen, u, mu, 1000000);
}

Outcome ac1() {
  Outcome out;
  out.limit_seconds = 120.0;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> mu_dist(0.1, 1.5);
  std::uniform_int_distribution<std::size_t> small_p(1, 8);
  double worst = 0.0;
  int oracle_runs = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t p = small_p(rng);
    const Vector u = oracle::gaussian_vector(p, rng, 1.5);
    const double mu = mu_dist(rng);
    for (const PenaltySpec& pen : penalty_family(p, rng)) {
      worst = std::max(worst, inf_distance(prox(pen, u, mu), prox_reference(pen, u, mu)));
      ++oracle_runs;
    }
  }
  std::uniform_int_distribution<std::size_t> any_p(1, 200);
  int cert_fail = 0, certs = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t p = any_p(rng);
    const Vector u = oracle::gaussian_vector(p, rng, 2.0);
    const double mu = mu_dist(rng);
    const auto family = penalty_family(p, rng);
    const PenaltySpec& pen = family[static_cast<std::size_t>(k) % family.size()];
    cert_fail += !prox_certificate(pen, u, prox(pen, u, mu), mu);
    ++certs;
  }
  out.pass = worst <= 1e-5 && cert_fail == 0;
  out.detail = std::to_string(oracle_runs) + " oracle comparisons, max linf " + fmt("%.2e", worst) + "; " +
               std::to_string(cert_fail) + "/" + std::to_string(certs) + " certificate failures";
  return out;
}

SolverConfig ac2_config(SolverId id) {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.max_iter = 1000000;
  cfg.max_seconds = 30.0;
  if (id == SolverId::ReweightedL2) cfg.epsilon_schedule.floor = 1e-24;
  if (id == SolverId::WorkingSet) cfg.inner_solver = SolverId::Fista;
  return cfg;
}

Outcome ac2() {
  Outcome out;
  out.limit_seconds = 180.0;
  const std::vector<SolverId> solvers{SolverId::Ista, SolverId::Fista, SolverId::Cd,
                                      SolverId::ReweightedL2, SolverId::WorkingSet, SolverId::Homotopy};
  double worst_gap = 0.0, worst_obj = 0.0, worst_w = 0.0;
  int failures = 0, pd_instances = 0;
  std::string first_failure;
  for (bench::Correlation corr : {bench::Correlation::Low, bench::Correlation::High}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const bench::Scenario sc = bench::generate_scenario(bench::small_scenario(corr, bench::Regularization::High, seed));
      const ProblemSpec pr = fixtures::make_problem(Loss::Square, sc.X, sc.y, bench::suggest_lambda(sc.X, sc.y, 20));
      const bool pd = oracle::min_eigenvalue_gram(sc.X) > 1e-10;
      pd_instances += pd;
      std::vector<Vector> ws;
      std::vector<double> objs;
      for (SolverId id : solvers) {
        const SolverTrace tr = solve(pr, id, ac2_config(id));
        const double g = relative_gap(duality_gap(pr, tr.final_w));
        worst_gap = std::max(worst_gap, g);
        if (!(g <= 1e-6)) {
          ++failures;
          if (first_failure.empty())
            first_failure = std::string(solver_name(id)) + " seed " + std::to_string(seed) + " gap " + fmt("%.2e", g);
        }
        ws.push_back(tr.final_w);
        objs.push_back(objective(pr, tr.final_w));
      }
      const double best = *std::min_element(objs.begin(), objs.end());
      for (std::size_t s = 0; s < solvers.size(); ++s) {
        const double rel = (objs[s] - best) / std::fabs(best);
        worst_obj = std::max(worst_obj, rel);
        if (!(rel <= 1e-6)) ++failures;
        if (pd) {
          const double d = inf_distance(ws[s], ws[0]);
          worst_w = std::max(worst_w, d);
          if (!(d <= 1e-5)) ++failures;
        }
      }
    }
  }
  out.pass = failures == 0;
  out.detail = "20 instances x 6 solvers, max rel gap " + fmt("%.2e", worst_gap) + ", max rel objective diff " +
               fmt("%.2e", worst_obj) + ", max linf diff " + fmt("%.2e", worst_w) + " (" +
               std::to_string(pd_instances) + " positive-definite)";
  if (!first_failure.empty()) out.detail += "; first failure: " + first_failure;
  return out;
}

Outcome ac3() {
  Outcome out;
  double worst_ratio = 0.0;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemSpec pr = seed % 2 ? fixtures::random_lasso(60, 100, 300 + seed, 0.05)
                                    : fixtures::random_lasso(100, 60, 300 + seed, 0.05);
    SolverConfig hcfg;
    hcfg.tol = 1e-12;
    const SolverTrace ref = solve_homotopy(pr, hcfg);
    if (!ref.converged) ++violations;
    const double fstar = objective(pr, ref.final_w);
    const double r0 = dot(ref.final_w, ref.final_w);
    SolverConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_iter = 2000;
    const SolverTrace tr = solve_fista(pr, cfg);
    const double L = tr.stats.final_lipschitz;
    for (const TraceRecord& rec : tr.records) {
      if (rec.iteration == 0) continue;
      const double t = rec.iteration;
      const double bound = 2.0 * L * r0 / ((t + 1.0) * (t + 1.0));
      const double excess = rec.objective - fstar;
      if (excess > bound + 1e-9) ++violations;
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, excess / bound);
    }
  }
  out.pass = violations == 0;
  out.detail = "10 instances, " + std::to_string(violations) + " violations, max (F-F*)/bound " + fmt("%.3f", worst_ratio);
  return out;
}

Outcome ac4() {
  Outcome out;
  out.limit_seconds = 60.0;
  int kkt_fail = 0, kkt_checks = 0;
  double worst_fista = 0.0, worst_loose = 0.0, worst_soft = 0.0;
  std::mt19937_64 rng(404);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ProblemSpec pr = fixtures::random_lasso(80, 40, 400 + seed);
    const RegularizationPath path = lasso_path(pr.X, pr.y, 0.01 * pr.lambda);
    for (const PathSegment& s : path.segments) {
      for (double lam : {s.lambda_high, 0.5 * (s.lambda_high + s.lambda_low), s.lambda_low}) {
        kkt_fail += !check_kkt(pr.X, pr.y, lam, path_solution_at(path, lam), 1e-8);
        ++kkt_checks;
      }
    }
    std::uniform_real_distribution<double> logu(std::log(0.01), 0.0);
    for (int k = 0; k < 10; ++k) {
      pr.lambda = path.lambda_max * std::exp(logu(rng));
      const Vector w = path_solution_at(path, pr.lambda);
      // A relative gap of 1e-10 only pins w to about 1e-5 on these scales, so
      // the hard comparison uses a reference solved to 1e-14.
      SolverConfig cfg;
      cfg.max_iter = 1000000;
      cfg.tol = 1e-10;
      worst_loose = std::max(worst_loose, inf_distance(solve_fista(pr, cfg).final_w, w));
      cfg.tol = 1e-14;
      worst_fista = std::max(worst_fista, inf_distance(solve_fista(pr, cfg).final_w, w));
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 r(450 + seed);
    const std::size_t n = 20 + 4 * seed, p = 5 + seed;
    const DenseMatrix X = oracle::orthonormal_columns(n, p, r, std::sqrt(static_cast<double>(n)));
    const Vector y = oracle::gaussian_vector(n, r);
    const Vector c = X.multiply_transpose(y);
    const RegularizationPath path = lasso_path(X, y, 0.0);
    std::uniform_real_distribution<double> u(0.0, 1.2);
    for (int k = 0; k < 100; ++k) {
      const double lam = u(r) * path.lambda_max;
      const Vector w = path_solution_at(path, lam);
      for (std::size_t j = 0; j < p; ++j) {
        const double v = c[j] / static_cast<double>(n);
        const double st = v > lam ? v - lam : (v < -lam ? v + lam : 0.0);
        worst_soft = std::max(worst_soft, std::fabs(w[j] - st));
      }
    }
  }
  out.pass = kkt_fail == 0 && worst_fista <= 1e-6 && worst_soft <= 1e-10;
  out.detail = std::to_string(kkt_fail) + "/" + std::to_string(kkt_checks) + " KKT failures, max linf vs FISTA " +
               fmt("%.2e", worst_fista) + " (reference at tol 1e-10: " + fmt("%.2e", worst_loose) +
               "), max linf vs soft-threshold " + fmt("%.2e", worst_soft);
  return out;
}

Outcome ac5() {
  Outcome out;
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<std::size_t> pd(1, 12);
  std::uniform_int_distribution<int> depth(1, 4);
  std::uniform_real_distribution<double> mu_dist(0.1, 1.5);
  double worst = 0.0;
  int identical_fail = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t p = pd(rng);
    const GroupStructure tree = oracle::random_tree(p, depth(rng), rng);
    const Vector u = oracle::gaussian_vector(p, rng, 1.5);
    const double mu = mu_dist(rng);
    for (const PenaltySpec& pen : {PenaltySpec{HierL1L2{tree}}, PenaltySpec{HierL1Linf{tree}}})
      worst = std::max(worst, inf_distance(prox(pen, u, mu), oracle::prox_subgradient(pen, u, mu, 1000000)));
    GroupStructure part = oracle::random_partition(p, rng);
    GroupStructure as_tree = part;
    as_tree.kind = StructureKind::Tree;
    identical_fail += prox(HierL1L2{as_tree}, u, mu) != prox(GroupL1L2{part}, u, mu);
    identical_fail += prox(HierL1Linf{as_tree}, u, mu) != prox(GroupL1Linf{part}, u, mu);
  }
  out.pass = worst <= 1e-5 && identical_fail == 0;
  out.detail = "50 trees, max linf vs oracle " + fmt("%.2e", worst) + ", " + std::to_string(identical_fail) +
               " partition mismatches";
  return out;
}

Outcome ac6() {
  Outcome out;
  std::mt19937_64 rng(606);
  double min_gap = INFINITY, worst_shortfall = -INFINITY;
  int fails = 0, pairs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 g(600 + seed);
    const GroupStructure part = oracle::random_partition(15, g);
    const GroupStructure tree = oracle::random_tree(15, 3, g);
    const std::vector<PenaltySpec> pens{L1{}, ElasticNet{0.5}, GroupL1L2{part}, GroupL1Linf{part}, HierL1L2{tree}};
    const PenaltySpec& pen = pens[seed % pens.size()];
    const ProblemSpec pr = seed % 3 == 2 ? fixtures::random_logistic(40, 15, 600 + seed, 0.2, pen)
                                         : fixtures::random_lasso(40, 15, 600 + seed, 0.15, pen);
    SolverConfig cfg;
    cfg.tol = 1e-300;
    cfg.max_iter = 100000;
    const Vector ref = solve_fista(pr, cfg).final_w;
    const double fstar = objective(pr, ref);
    // Perturbations from 1e-1 down to 1e-5 around the reference solution.
    for (int k = 0; k < 5; ++k) {
      Vector w = oracle::gaussian_vector(15, rng, std::pow(10.0, -1 - k));
      for (std::size_t j = 0; j < w.size(); ++j) w[j] += ref[j];
      const GapCertificate c = duality_gap(pr, w);
      const double sub = objective(pr, w) - fstar;
      min_gap = std::min(min_gap, c.gap);
      worst_shortfall = std::max(worst_shortfall, sub - c.gap);
      fails += !(c.gap >= -1e-10) || !(c.gap >= sub - 1e-9);
      ++pairs;
    }
  }
  out.pass = fails == 0;
  out.detail = std::to_string(pairs) + " pairs, " + std::to_string(fails) + " failures, min gap " + fmt("%.2e", min_gap) +
               ", max (subopt - gap) " + fmt("%.2e", worst_shortfall);
  return out;
}

Outcome ac7() {
  Outcome out;
  double worst_fd = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ProblemSpec pr = fixtures::random_logistic(30 + seed, 10 + seed % 7, 700 + seed);
    std::mt19937_64 rng(750 + seed);
    const Vector w = oracle::gaussian_vector(pr.p(), rng, 0.5);
    const LossEval e = loss_value_grad(pr, w);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < pr.p(); ++j) {
      Vector a = w, b = w;
      const double h = 1e-5;
      a[j] += h;
      b[j] -= h;
      const double fd = (loss_value(pr, a) - loss_value(pr, b)) / (2.0 * h);
      err = std::max(err, std::fabs(fd - e.gradient[j]));
      scale = std::max(scale, std::fabs(e.gradient[j]));
    }
    worst_fd = std::max(worst_fd, err / scale);
  }
  const ProblemSpec pr = fixtures::random_logistic(100, 50, 777, 0.1);
  SolverConfig cfg;
  cfg.tol = 1e-8;
  cfg.max_iter = 1000000;
  const SolverTrace a = solve_cd_smooth(pr, cfg);
  const SolverTrace b = solve_fista(pr, cfg);
  const double diff = inf_distance(a.final_w, b.final_w);
  out.pass = worst_fd <= 1e-5 && a.converged && b.converged && diff <= 1e-4;
  out.detail = "max finite-difference rel err " + fmt("%.2e", worst_fd) + ", cd-smooth vs FISTA linf " + fmt("%.2e", diff);
  return out;
}

Outcome ac8() {
  Outcome out;
  int fails = 0;
  double worst_res = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(800 + seed);
    const std::size_t p = 16 + (seed * 7) % 49;  // 16..64
    const std::size_t n = p + seed % 3 * 8;
    const std::size_t s = 1 + seed % 10;
    const DenseMatrix X = oracle::orthonormal_columns(n, p, rng, 1.0 + seed % 4);
    std::vector<std::size_t> idx(p);
    for (std::size_t j = 0; j < p; ++j) idx[j] = j;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::size_t> support(idx.begin(), idx.begin() + s);
    std::sort(support.begin(), support.end());
    Vector w(p, 0.0);
    std::normal_distribution<double> nd;
    for (std::size_t j : support) w[j] = nd(rng) + (nd(rng) > 0 ? 0.5 : -0.5);
    const Vector y = X.multiply(w);
    const GreedyResult r = omp(X, y, s);
    std::vector<std::size_t> got = r.support;
    std::sort(got.begin(), got.end());
    const double res = r.residual_norms.back();
    worst_res = std::max(worst_res, res);
    fails += got != support || r.residual_norms.size() != s + 1 || !(res <= 1e-10);
  }
  out.pass = fails == 0;
  out.detail = "50 seeds, " + std::to_string(fails) + " failures, max residual " + fmt("%.2e", worst_res);
  return out;
}

Outcome ac9() {
  Outcome out;
  int increases = 0, stable_by_4 = 0;
  double worst = -INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemSpec pr = seed % 4 == 3 ? fixtures::random_logistic(60, 40, 900 + seed, 0.1)
                                         : fixtures::random_lasso(50, 80, 900 + seed, 0.1);
    const ConcavePenalty z = seed % 2 ? ConcavePenalty::lq_eps(0.5, 1e-2) : ConcavePenalty::log_eps(1e-2);
    const ReweightedL1Result r = reweighted_l1(pr, z, 10);
    for (std::size_t k = 1; k < r.objectives.size(); ++k) {
      const double up = r.objectives[k] - r.objectives[k - 1];
      worst = std::max(worst, up);
      increases += up > 1e-12;
    }
    stable_by_4 += r.stable_from <= 4;
  }
  out.pass = increases == 0;
  out.detail = "20 instances, " + std::to_string(increases) + " increases, max step change " + fmt("%.2e", worst) +
               "; support stable by outer iteration 4 on " + std::to_string(stable_by_4) + "/20";
  return out;
}

Outcome ac10() {
  Outcome out;
  out.soft = true;
  bench::BenchmarkOptions opt;
  opt.tol = 1e-10;
  opt.budget_seconds = 60.0;
  opt.repeats = 5;
  opt.target = 1e-6;
  const auto spec = bench::small_scenario(bench::Correlation::Low, bench::Regularization::High, 0);
  const bench::BenchmarkResult res = bench::run_benchmark(spec, {SolverId::Homotopy, SolverId::Ista}, opt);
  const auto& h = res.median_time_to_target[0];
  const auto& i = res.median_time_to_target[1];
  out.pass = h.has_value() && (!i.has_value() || *h < *i);
  out.detail = "median time to 1e-6: homotopy " + (h ? fmt("%.4f s", *h) : std::string("not reached")) + ", ISTA " +
               (i ? fmt("%.4f s", *i) : std::string("not reached"));
  return out;
}

int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ac11() {
  Outcome out;
  const fs::path base = fs::temp_directory_path() / ("sparseopt_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const std::string cmd = std::string(SPARSEOPT_BENCH_CLI) +
                          " --scenario small --corr high --reg high --solvers fista,ista,cd,rel2,homotopy,sg"
                          " --repeats 2 --tol 1e-6 --no-timing --out ";
  const int c1 = run_command(cmd + (base / "a").string());
  const int c2 = run_command(cmd + (base / "b").string());
  int files = 0, differ = 0;
  if (c1 == 0 && c2 == 0) {
    for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
      if (!e.is_regular_file()) continue;
      const fs::path rel = fs::relative(e.path(), base / "a");
      ++files;
      differ += slurp(e.path()) != slurp(base / "b" / rel);
    }
  }
  fs::remove_all(base);
  out.pass = c1 == 0 && c2 == 0 && files > 1 && differ == 0;
  out.detail = "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + ", " + std::to_string(files) +
               " files compared, " + std::to_string(differ) + " differ";
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "prox oracle suite", ac1},
      {"AC2", "solver agreement", ac2},
      {"AC3", "FISTA rate certificate", ac3},
      {"AC4", "homotopy KKT and exactness", ac4},
      {"AC5", "hierarchical prox", ac5},
      {"AC6", "duality-gap sandwich", ac6},
      {"AC7", "logistic correctness", ac7},
      {"AC8", "OMP exact recovery", ac8},
      {"AC9", "reweighted-l1 descent", ac9},
      {"AC10", "benchmark ordering (soft)", ac10},
      {"AC11", "CLI determinism", ac11},
  };
  int hard_failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string note;
    if (o.limit_seconds > 0.0 && secs > o.limit_seconds) {
      o.pass = false;
      note = " [over " + fmt("%.0f", o.limit_seconds) + " s limit]";
    }
    const char* verdict = o.pass ? "PASS" : (o.soft ? "WARN" : "FAIL");
    std::printf("%-5s %s  %s: %s (%.1f s)%s\n", c.id, verdict, c.title, o.detail.c_str(), secs, note.c_str());
    std::fflush(stdout);
    if (!o.pass && !o.soft) ++hard_failures;
  }
  std::printf("%d hard failure(s)\n", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
