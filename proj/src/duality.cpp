#include "sparseopt/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparseopt/kernels.hpp"
#include "sparseopt/losses.hpp"
#include "sparseopt/penalties.hpp"

namespace sparseopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// psi_n^*(s * grad psi_n(u)), evaluated without forming the scaled vector for
// the logistic loss so that s * sigma(.) stays inside [0, 1].
double scaled_conjugate(const ProblemSpec& problem, std::span<const double> u,
                        std::span<const double> kappa, double s) {
  const double n = static_cast<double>(problem.n());
  if (problem.loss == Loss::Square) {
    return 0.5 * n * kernels::sum_sq(kappa) + kernels::dot(kappa, problem.y);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < problem.n(); ++i) {
    const double v = s * sigmoid(-problem.y[i] * u[i]);
    if (!(v >= 0.0 && v <= 1.0)) return kInf;
    if (v > 0.0) acc += v * std::log(v);
    if (v < 1.0) acc += (1.0 - v) * std::log1p(-v);
  }
  return acc / n;
}

double scale_factor(double lambda, double dual_norm) {
  if (dual_norm <= lambda) return 1.0;
  return lambda / dual_norm;  // 0 when lambda == 0 or dual_norm == inf
}

}  // namespace

GapCertificate duality_gap(const ProblemSpec& problem, std::span<const double> w,
                           std::span<const double> margins, std::span<const double> gradient) {
  if (std::holds_alternative<L1Ball>(problem.penalty))
    throw Error(ErrorCode::UnsupportedPenalty, "no duality gap for the l1-ball constraint");
  if (w.size() != problem.p() || gradient.size() != problem.p() || margins.size() != problem.n())
    throw Error(ErrorCode::DimensionMismatch, "duality_gap: inconsistent lengths");

  const double lambda = problem.lambda;
  const double loss = psi_value(problem, margins);
  Vector kappa(problem.n());
  psi_gradient(problem, margins, kappa);

  GapCertificate cert;
  if (const auto* en = std::get_if<ElasticNet>(&problem.penalty)) {
    // Smooth part f + (lambda gamma / 2)|w|^2 against lambda |w|_1.
    const double lg = lambda * en->gamma;
    double dn = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) dn = std::max(dn, std::fabs(gradient[j] + lg * w[j]));
    const double s = scale_factor(lambda, dn);
    kernels::scale(s, kappa);
    const double l1 = kernels::abs_sum(w);
    const double sq = kernels::sum_sq(w);
    const double conj = scaled_conjugate(problem, margins, kappa, s);
    cert.primal = loss + lambda * l1 + 0.5 * lg * sq;
    // h^*(s lg w) = s^2 lg |w|^2 / 2 for h = (lg / 2)|.|^2.
    const double quad_conj = lg > 0.0 ? 0.5 * s * s * lg * sq : 0.0;
    cert.dual = -conj - quad_conj;
    cert.gap = cert.primal - cert.dual;
    const double kx = kernels::dot(kappa, margins);
    cert.loss_term = (loss + conj - kx) + (0.5 * lg * sq + quad_conj - s * lg * sq);
    cert.penalty_term = lambda * l1 + s * (kernels::dot(w, gradient) + lg * sq);
  } else {
    const double dn = tree_dual_norm(problem.penalty, gradient);
    const double s = scale_factor(lambda, dn);
    kernels::scale(s, kappa);
    const double omega = norm_value(problem.penalty, w);
    const double conj = scaled_conjugate(problem, margins, kappa, s);
    cert.primal = loss + (lambda == 0.0 ? 0.0 : lambda * omega);
    cert.dual = -conj;
    cert.gap = cert.primal - cert.dual;
    cert.loss_term = loss + conj - kernels::dot(kappa, margins);
    cert.penalty_term = (lambda == 0.0 ? 0.0 : lambda * omega) + s * kernels::dot(w, gradient);
  }
  if (!std::isfinite(cert.gap)) cert.gap = kInf;
  return cert;
}

GapCertificate duality_gap(const ProblemSpec& problem, std::span<const double> w) {
  if (w.size() != problem.p()) throw Error(ErrorCode::DimensionMismatch, "w has wrong length");
  const Vector margins = problem.X.multiply(w);
  Vector r(problem.n());
  psi_gradient(problem, margins, r);
  const Vector gradient = problem.X.multiply_transpose(r);
  return duality_gap(problem, w, margins, gradient);
}

double relative_gap(const GapCertificate& cert) {
  return cert.gap / std::max(std::fabs(cert.primal), 1.0);
}

}  // namespace sparseopt
