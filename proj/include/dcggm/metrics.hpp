#pragma once

#include "dcggm/matrix.hpp"
#include "dcggm/synthetic.hpp"

namespace dcggm {

inline constexpr double kZeroTol = 1e-8;

/// Upper-triangle pairs with |omega_jk| > zero_tol.
EdgeSet edge_support(const SymMatrix& omega, double zero_tol = kZeroTol);
Index edge_count(const SymMatrix& omega, double zero_tol = kZeroTol);

struct ConfusionCounts {
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
};

ConfusionCounts confusion(const SymMatrix& omega_hat, const SymMatrix& omega_true, double zero_tol = kZeroTol);

double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
/// Harmonic mean of precision and recall; 0 when tp == 0.
double f1_score(const ConfusionCounts& c);

/// -log|Omega| + tr(Omega S_test)
double holdout_neg_loglik(const SymMatrix& omega, const SymMatrix& s_test);

}  // namespace dcggm
