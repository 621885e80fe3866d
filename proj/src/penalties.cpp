#include "dcggm/penalties.hpp"

#include <algorithm>
#include <cmath>

namespace dcggm {

namespace {

void check_scad(const ScadParams& params) {
  if (!(params.lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "SCAD lambda must be >= 0");
  if (!(params.a > 2.0)) throw Error(ErrorKind::InvalidArgument, "SCAD a must be > 2");
}

}  // namespace

double scad_value(double x, const ScadParams& params) {
  const double ax = std::abs(x);
  const double lam = params.lambda;
  const double a = params.a;
  if (ax <= lam) return lam * ax;
  if (ax <= a * lam) return (a * lam * ax - 0.5 * (x * x + lam * lam)) / (a - 1.0);
  return 0.5 * (a + 1.0) * lam * lam;
}

double scad_weight(double x, const ScadParams& params) {
  const double ax = std::abs(x);
  if (ax <= params.lambda) return params.lambda;
  return std::max(params.a * params.lambda - ax, 0.0) / (params.a - 1.0);
}

double scad_penalty_sum(const SymMatrix& omega, const ScadParams& params) {
  double sum = 0.0;
  const Eigen::MatrixXd& om = omega.dense();
  for (Index k = 0; k < om.cols(); ++k)
    for (Index j = 0; j < om.rows(); ++j) sum += scad_value(om(j, k), params);
  return sum;
}

double scad_objective(const SymMatrix& omega, const SymMatrix& s, const ScadParams& params) {
  return neg_loglik(omega, s) + scad_penalty_sum(omega, params);
}

ScadFit scad_fit_detailed(const SymMatrix& s, const ScadParams& params, const GlassoOptions& opts,
                          int lla_rounds) {
  check_scad(params);
  if (lla_rounds < 0) throw Error(ErrorKind::InvalidArgument, "lla_rounds must be >= 0");
  ScadFit fit;
  fit.solution = glasso_fit(s, PenaltySpec(params.lambda), opts);
  fit.weights = SymMatrix(Eigen::MatrixXd::Constant(s.dim(), s.dim(), params.lambda));
  fit.objective_per_round.push_back(scad_objective(fit.solution.omega, s, params));
  const Index p = s.dim();
  for (int round = 0; round < lla_rounds; ++round) {
    Eigen::MatrixXd w(p, p);
    const Eigen::MatrixXd& om = fit.solution.omega.dense();
    for (Index k = 0; k < p; ++k)
      for (Index j = 0; j < p; ++j) w(j, k) = scad_weight(om(j, k), params);
    fit.weights = SymMatrix(w);
    fit.solution = glasso_fit(s, PenaltySpec(fit.weights), opts, &fit.solution);
    fit.objective_per_round.push_back(scad_objective(fit.solution.omega, s, params));
  }
  return fit;
}

GlassoSolution scad_fit(const SymMatrix& s, const ScadParams& params, const GlassoOptions& opts, int lla_rounds) {
  return scad_fit_detailed(s, params, opts, lla_rounds).solution;
}

SymMatrix adaptive_weights(const SymMatrix& omega_tilde, const AdaptiveParams& params) {
  if (!(params.lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "adaptive lambda must be >= 0");
  if (!(params.gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "adaptive gamma must be > 0");
  const Index p = omega_tilde.dim();
  const double cap = params.lambda * params.weight_cap;
  Eigen::MatrixXd w(p, p);
  for (Index k = 0; k < p; ++k) {
    for (Index j = 0; j < p; ++j) {
      const double mag = std::pow(std::abs(omega_tilde(j, k)), params.gamma);
      // lambda / 0 is +inf, which the cap absorbs.
      w(j, k) = mag > 0.0 ? std::min(params.lambda / mag, cap) : cap;
    }
  }
  return SymMatrix(w);
}

double lambda_max(const SymMatrix& s) {
  double m = 0.0;
  for (Index k = 0; k < s.dim(); ++k)
    for (Index j = 0; j < k; ++j) m = std::max(m, std::abs(s(j, k)));
  return m;
}

AdaptiveFit adaptive_fit_detailed(const SymMatrix& s, const AdaptiveParams& params, const GlassoOptions& opts) {
  AdaptiveFit fit;
  fit.pilot = glasso_fit(s, PenaltySpec(0.1 * lambda_max(s)), opts).omega;
  fit.weights = adaptive_weights(fit.pilot, params);
  fit.solution = glasso_fit(s, PenaltySpec(fit.weights), opts);
  return fit;
}

GlassoSolution adaptive_fit(const SymMatrix& s, const AdaptiveParams& params, const GlassoOptions& opts) {
  return adaptive_fit_detailed(s, params, opts).solution;
}

}  // namespace dcggm
