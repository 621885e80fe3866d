#pragma once

#include "dcggm/glasso.hpp"

namespace dcggm {

struct ScadParams {
  double lambda = 0.0;
  double a = 3.7;
};

struct AdaptiveParams {
  double lambda = 0.0;
  double gamma = 0.5;
  double weight_cap = 1e6;
};

double scad_value(double x, const ScadParams& params);
/// Derivative of scad_value in |x|; the weight of the local linear approximation.
double scad_weight(double x, const ScadParams& params);
/// sum_{j,k} SCAD(omega_jk)
double scad_penalty_sum(const SymMatrix& omega, const ScadParams& params);
/// -log|Omega| + tr(Omega S) + sum SCAD(omega_jk)
double scad_objective(const SymMatrix& omega, const SymMatrix& s, const ScadParams& params);

struct ScadFit {
  GlassoSolution solution;
  SymMatrix weights;  // weight matrix of the final round
  std::vector<double> objective_per_round;  // round 0 is the plain l1 fit
};

/// SCAD via local linear approximation: an l1 fit followed by `lla_rounds`
/// reweighted fits.
ScadFit scad_fit_detailed(const SymMatrix& s, const ScadParams& params, const GlassoOptions& opts = {},
                          int lla_rounds = 3);
GlassoSolution scad_fit(const SymMatrix& s, const ScadParams& params, const GlassoOptions& opts = {},
                        int lla_rounds = 3);

/// lambda / |omega_tilde_jk|^gamma, capped at lambda * weight_cap.
SymMatrix adaptive_weights(const SymMatrix& omega_tilde, const AdaptiveParams& params);

/// max_{j<k} |s_jk|: the smallest scalar penalty that empties the graph.
double lambda_max(const SymMatrix& s);

struct AdaptiveFit {
  GlassoSolution solution;
  SymMatrix pilot;
  SymMatrix weights;
};

/// Pilot glasso at 0.1 * lambda_max(s), then the weighted fit.
AdaptiveFit adaptive_fit_detailed(const SymMatrix& s, const AdaptiveParams& params, const GlassoOptions& opts = {});
GlassoSolution adaptive_fit(const SymMatrix& s, const AdaptiveParams& params, const GlassoOptions& opts = {});

}  // namespace dcggm
