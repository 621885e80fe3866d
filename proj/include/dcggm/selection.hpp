#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "dcggm/dc.hpp"
#include "dcggm/glasso.hpp"
#include "dcggm/metrics.hpp"

namespace dcggm {

enum class Method { dc, glasso, scad, adapt };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
/// Methods tuned by a penalty lambda (the rest are tuned by K).
inline bool uses_lambda(Method m) { return m != Method::dc; }

struct MethodSettings {
  GlassoOptions glasso{};
  DcOptions dc{};  // k is overwritten per fit
  double scad_a = 3.7;
  int lla_rounds = 3;
  double adapt_gamma = 0.5;
  double zero_tol = kZeroTol;
};

struct FitOutcome {
  SymMatrix omega;
  Index edges = 0;
  bool converged = false;
  /// dc only; NaN for the lambda methods.
  double constraint_gap = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  /// glasso only: reusable as a warm start.
  GlassoSolution glasso;
};

/// Fit `method` at `param` (K for dc, lambda otherwise).
FitOutcome fit_method(Method method, const SymMatrix& s, double param, const MethodSettings& settings,
                      const FitOutcome* warm = nullptr);

/// Seeded permutation of 0..n-1 cut into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Evenly spaced K from p+1 to p(p+1)/2; interior values with odd K - p are lowered by one.
std::vector<Index> k_grid(Index p, int points = 100);

/// linspace(0, lambda_max(s), points), deduplicated.
std::vector<double> lambda_grid(const SymMatrix& s, int points = 100);

struct CvResult {
  /// Grid in evaluation order: sparse to dense (K ascending, lambda descending).
  std::vector<double> grid;
  std::vector<double> mean_holdout_ll;  // -inf for failed points
  std::vector<double> mean_edges;
  std::vector<int> failures;
  double chosen = 0.0;
  Index chosen_edges = 0;
  FitOutcome refit;
};

/// k-fold cross-validation on the held-out log-likelihood; training covariances
/// are shrunk per fold. Ties go to the sparser model.
CvResult cross_validate(Method method, const Eigen::MatrixXd& x, const SymMatrix& full_s, std::vector<double> grid,
                        int folds, std::uint64_t seed, const MethodSettings& settings);

struct Calibration {
  FitOutcome fit;
  double param = 0.0;
  Index achieved_edges = 0;
  bool exact = false;
  int evaluations = 0;
};

/// Tune `method` to report `target_edges` edges: K = p + 2 * target for dc,
/// bisection on lambda in [0, lambda_max] otherwise.
Calibration calibrate_edges(Method method, const SymMatrix& s, Index target_edges, const MethodSettings& settings,
                            int max_bisection = 60);

}  // namespace dcggm
