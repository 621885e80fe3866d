#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dcggm/matrix.hpp"

namespace dcggm {

/// Entrywise l1 weights: one scalar for every entry, or a symmetric
/// nonnegative matrix (adaptive / reweighted fits).
class PenaltySpec {
 public:
  PenaltySpec(double lambda);  // NOLINT: implicit from a scalar is intended
  PenaltySpec(SymMatrix weights);  // NOLINT

  bool is_scalar() const noexcept { return !weights_.has_value(); }
  double scalar() const noexcept { return lambda_; }
  const SymMatrix& weights() const { return *weights_; }
  /// Dense p x p weight matrix.
  Eigen::MatrixXd dense(Index p) const;

 private:
  double lambda_ = 0.0;
  std::optional<SymMatrix> weights_;
};

struct GlassoOptions {
  double tol = 1e-5;
  int max_sweeps = 200;
  double inner_tol = 1e-7;
  bool penalize_diagonal = true;
};

struct GlassoSolution {
  SymMatrix omega;
  SymMatrix sigma;  // the working covariance W
  int sweeps = 0;
  bool converged = false;
  double kkt_residual = 0.0;
};

/// Coordinate descent for  min 1/2 b'Qb - b'x + sum rho_j |x_j|  (x = beta).
/// Throws NotPositiveDefinite for a non-PD q and NonConvergence after
/// 10 * max_sweeps sweeps.
std::vector<double> lasso_cd(const SymMatrix& q, std::span<const double> b, std::span<const double> rho,
                             std::span<const double> beta0, double inner_tol = 1e-7, int max_sweeps = 200);

/// Blockwise coordinate-descent graphical lasso on the covariance W.
///
/// `warm` seeds W and the per-column regressions from an earlier solution
/// (same dimension). Non-convergence is reported through `converged`, with
/// the iterate from the sweep of smallest change returned.
GlassoSolution glasso_fit(const SymMatrix& s, const PenaltySpec& penalty, const GlassoOptions& opts = {},
                          const GlassoSolution* warm = nullptr);

/// Max violation of  -Omega^{-1} + S + Lambda .* Gamma(Omega) = 0  over all entries.
double kkt_residual(const SymMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty);

/// -log|Omega| + tr(Omega S) + sum Lambda_jk |omega_jk|
double objective_penalized(const SymMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty);

/// -log|Omega| + tr(Omega S)
double neg_loglik(const SymMatrix& omega, const SymMatrix& s);

}  // namespace dcggm
