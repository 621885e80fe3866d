#include "dcggm/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "dcggm/penalties.hpp"
#include "dcggm/random.hpp"
#include "dcggm/synthetic.hpp"

namespace dcggm {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::dc: return "dc";
    case Method::glasso: return "glasso";
    case Method::scad: return "scad";
    case Method::adapt: return "adapt";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "dc") return Method::dc;
  if (name == "glasso") return Method::glasso;
  if (name == "scad") return Method::scad;
  if (name == "adapt") return Method::adapt;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

FitOutcome fit_method(Method method, const SymMatrix& s, double param, const MethodSettings& settings,
                      const FitOutcome* warm) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  FitOutcome out;
  switch (method) {
    case Method::dc: {
      DcOptions opts = settings.dc;
      opts.k = static_cast<Index>(std::llround(param));
      auto sol = dc_fit(s, opts);
      out.converged = sol.converged;
      out.iterations = static_cast<int>(sol.trace.size());
      out.constraint_gap = sol.trace.empty() ? 0.0 : sol.trace.back().constraint_gap;
      out.kkt_residual = sol.trace.empty() ? 0.0 : sol.trace.back().inner_kkt;
      out.omega = std::move(sol.omega);
      break;
    }
    case Method::glasso: {
      const GlassoSolution* w = (warm && warm->glasso.omega.dim() == s.dim()) ? &warm->glasso : nullptr;
      out.glasso = glasso_fit(s, PenaltySpec(param), settings.glasso, w);
      out.converged = out.glasso.converged;
      out.iterations = out.glasso.sweeps;
      out.kkt_residual = out.glasso.kkt_residual;
      out.omega = out.glasso.omega;
      break;
    }
    case Method::scad: {
      auto sol = scad_fit(s, ScadParams{param, settings.scad_a}, settings.glasso, settings.lla_rounds);
      out.converged = sol.converged;
      out.iterations = sol.sweeps;
      out.kkt_residual = sol.kkt_residual;
      out.omega = std::move(sol.omega);
      break;
    }
    case Method::adapt: {
      auto sol = adaptive_fit(s, AdaptiveParams{param, settings.adapt_gamma}, settings.glasso);
      out.converged = sol.converged;
      out.iterations = sol.sweeps;
      out.kkt_residual = sol.kkt_residual;
      out.omega = std::move(sol.omega);
      break;
    }
  }
  out.edges = edge_count(out.omega, settings.zero_tol);
  out.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return out;
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::InvalidFolds, "folds=" + std::to_string(k) + " with n=" + std::to_string(n));
  }
  const auto perm = permutation(n, seed);
  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

std::vector<Index> k_grid(Index p, int points) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "grid needs >= 2 points");
  const double lo = double(p + 1);
  const double hi = double(p * (p + 1) / 2);
  std::vector<Index> out;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * double(i) / double(points - 1);
    auto k = static_cast<Index>(std::llround(x));
    const bool endpoint = i == 0 || i == points - 1;
    if (!endpoint && (k - p) % 2 != 0) --k;
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

std::vector<double> lambda_grid(const SymMatrix& s, int points) {
  if (points < 2) throw Error(ErrorKind::InvalidArgument, "grid needs >= 2 points");
  const double lmax = lambda_max(s);
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double x = i == points - 1 ? lmax : lmax * double(i) / double(points - 1);
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  if (out.empty()) out.push_back(0.0);
  return out;
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(static_cast<Index>(rows[i]));
  return out;
}

}  // namespace

CvResult cross_validate(Method method, const Eigen::MatrixXd& x, const SymMatrix& full_s, std::vector<double> grid,
                        int folds, std::uint64_t seed, const MethodSettings& settings) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "cross_validate: empty grid");
  // Canonical sparse-to-dense order makes the result independent of the caller's order.
  if (uses_lambda(method)) {
    std::sort(grid.begin(), grid.end(), std::greater<>());
  } else {
    std::sort(grid.begin(), grid.end());
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto split = kfold_split(static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(folds), seed);
  const std::size_t g = grid.size();
  CvResult out;
  out.grid = grid;
  std::vector<double> ll_sum(g, 0.0);
  std::vector<double> edge_sum(g, 0.0);
  out.failures.assign(g, 0);

  for (std::size_t f = 0; f < split.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t h = 0; h < split.size(); ++h)
      if (h != f) train.insert(train.end(), split[h].begin(), split[h].end());
    std::sort(train.begin(), train.end());
    const SymMatrix s_train = shrink_covariance(sample_covariance(take_rows(x, train)), static_cast<Index>(train.size())).s;
    const SymMatrix s_test = sample_covariance(take_rows(x, split[f]));

    FitOutcome prev;
    bool have_prev = false;
    for (std::size_t i = 0; i < g; ++i) {
      try {
        FitOutcome fit = fit_method(method, s_train, grid[i], settings, have_prev ? &prev : nullptr);
        ll_sum[i] += -holdout_neg_loglik(fit.omega, s_test);
        edge_sum[i] += double(fit.edges);
        prev = std::move(fit);
        have_prev = true;
      } catch (const Error&) {
        ++out.failures[i];
        have_prev = false;
      }
    }
  }

  out.mean_holdout_ll.resize(g);
  out.mean_edges.resize(g);
  const double nf = double(split.size());
  std::size_t best = g;
  for (std::size_t i = 0; i < g; ++i) {
    out.mean_edges[i] = edge_sum[i] / nf;
    out.mean_holdout_ll[i] = out.failures[i] ? -std::numeric_limits<double>::infinity() : ll_sum[i] / nf;
    // Strict improvement only: the sparser (earlier) point wins ties.
    if (out.failures[i] == 0 && (best == g || out.mean_holdout_ll[i] > out.mean_holdout_ll[best])) best = i;
  }
  if (best == g) throw Error(ErrorKind::NonConvergence, "cross_validate: every grid point failed");
  out.chosen = grid[best];
  out.refit = fit_method(method, full_s, out.chosen, settings);
  out.chosen_edges = out.refit.edges;
  return out;
}

Calibration calibrate_edges(Method method, const SymMatrix& s, Index target_edges, const MethodSettings& settings,
                            int max_bisection) {
  const Index p = s.dim();
  if (target_edges < 0 || target_edges > p * (p - 1) / 2) {
    throw Error(ErrorKind::InvalidEdgeCount, "calibrate_edges: target " + std::to_string(target_edges));
  }
  Calibration cal;
  if (method == Method::dc) {
    cal.param = double(p + 2 * target_edges);
    cal.fit = fit_method(method, s, cal.param, settings);
    cal.achieved_edges = cal.fit.edges;
    cal.exact = cal.achieved_edges == target_edges;
    cal.evaluations = 1;
    return cal;
  }

  bool have = false;
  auto consider = [&](double lam, FitOutcome fit) {
    ++cal.evaluations;
    const Index e = fit.edges;
    const auto dist = std::abs(e - target_edges);
    const auto best_dist = std::abs(cal.achieved_edges - target_edges);
    if (!have || dist < best_dist || (dist == best_dist && e < cal.achieved_edges)) {
      cal.param = lam;
      cal.achieved_edges = e;
      cal.fit = std::move(fit);
      have = true;
    }
    return e;
  };

  double lo = 0.0;
  double hi = lambda_max(s);
  Index e_hi = consider(hi, fit_method(method, s, hi, settings));
  if (e_hi == target_edges) {
    cal.exact = true;
    return cal;
  }
  FitOutcome warm = cal.fit;
  for (int it = 0; it < max_bisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    FitOutcome fit = fit_method(method, s, mid, settings, &warm);
    warm = fit;
    const Index e = consider(mid, std::move(fit));
    if (e == target_edges) {
      cal.exact = true;
      break;
    }
    if (e > target_edges) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return cal;
}

}  // namespace dcggm
