#include "dcggm/metrics.hpp"

#include <cmath>

#include "dcggm/glasso.hpp"

namespace dcggm {

EdgeSet edge_support(const SymMatrix& omega, double zero_tol) {
  EdgeSet out;
  for (Index j = 0; j < omega.dim(); ++j)
    for (Index k = j + 1; k < omega.dim(); ++k)
      if (std::abs(omega(j, k)) > zero_tol) out.emplace_back(j, k);
  return out;
}

Index edge_count(const SymMatrix& omega, double zero_tol) {
  Index n = 0;
  for (Index k = 0; k < omega.dim(); ++k)
    for (Index j = 0; j < k; ++j)
      if (std::abs(omega(j, k)) > zero_tol) ++n;
  return n;
}

ConfusionCounts confusion(const SymMatrix& omega_hat, const SymMatrix& omega_true, double zero_tol) {
  if (omega_hat.dim() != omega_true.dim()) throw Error(ErrorKind::DimensionMismatch, "confusion");
  ConfusionCounts c;
  for (Index k = 0; k < omega_hat.dim(); ++k) {
    for (Index j = 0; j < k; ++j) {
      const bool est = std::abs(omega_hat(j, k)) > zero_tol;
      const bool truth = std::abs(omega_true(j, k)) > zero_tol;
      c.tp += est && truth;
      c.fp += est && !truth;
      c.fn += !est && truth;
    }
  }
  return c;
}

double precision(const ConfusionCounts& c) { return c.tp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp); }

double recall(const ConfusionCounts& c) { return c.tp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fn); }

double f1_score(const ConfusionCounts& c) {
  if (c.tp == 0) return 0.0;
  const double pr = precision(c);
  const double rc = recall(c);
  return 2.0 * pr * rc / (pr + rc);
}

double holdout_neg_loglik(const SymMatrix& omega, const SymMatrix& s_test) { return neg_loglik(omega, s_test); }

}  // namespace dcggm
