#pragma once

#include <span>

#include "sparseopt/core.hpp"

namespace sparseopt {

/// Primal/dual pair for the Fenchel dual max -psi_n^*(k) s.t. Omega*(X^T k) <= lambda.
///
/// gap == loss_term + penalty_term, the two Fenchel-Young residuals:
///   loss_term    = psi_n(Xw) + psi_n^*(k) - k^T X w
///   penalty_term = lambda Omega(w) + w^T X^T k
struct GapCertificate {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double loss_term = 0.0;
  double penalty_term = 0.0;
};

/// Supports L1, ElasticNet, GroupL1L2, GroupL1Linf and the hierarchical
/// penalties. Throws UnsupportedPenalty for L1Ball. A dual point outside the
/// conjugate's domain yields gap = +inf.
GapCertificate duality_gap(const ProblemSpec& problem, std::span<const double> w);

/// Same, reusing margins Xw and the loss gradient X^T grad psi_n(Xw).
GapCertificate duality_gap(const ProblemSpec& problem, std::span<const double> w,
                           std::span<const double> margins, std::span<const double> gradient);

/// gap / max(|primal|, 1).
double relative_gap(const GapCertificate& cert);

}  // namespace sparseopt
