#include "dcggm/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dcggm {

PenaltySpec::PenaltySpec(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "penalty must be finite and >= 0");
  }
}

PenaltySpec::PenaltySpec(SymMatrix weights) : weights_(std::move(weights)) {
  if (weights_->dim() > 0 && weights_->dense().minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "penalty weights must be >= 0");
  }
}

Eigen::MatrixXd PenaltySpec::dense(Index p) const {
  if (is_scalar()) return Eigen::MatrixXd::Constant(p, p, lambda_);
  if (weights_->dim() != p) throw Error(ErrorKind::DimensionMismatch, "penalty matrix dimension");
  return weights_->dense();
}

namespace {

struct LassoStatus {
  int sweeps = 0;
  bool converged = false;
};

// Coordinate descent on the block of `w` that excludes index `skip`
// (skip = -1 uses all coordinates). `wb` holds W * beta and is kept in sync;
// a zero coordinate costs O(1) to visit, a moving one O(p).
LassoStatus column_lasso(const Eigen::MatrixXd& w, Index skip, const double* b, const double* rho,
                         Eigen::VectorXd& beta, Eigen::VectorXd& wb, double tol, int max_total_sweeps) {
  const Index p = w.rows();
  LassoStatus st;
  bool full = true;
  while (st.sweeps < max_total_sweeps) {
    ++st.sweeps;
    double max_change = 0.0;
    double max_beta = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (j == skip) continue;
      const double old = beta[j];
      if (!full && old == 0.0) continue;
      const double wjj = w(j, j);
      const double z = b[j] - (wb[j] - wjj * old);
      const double updated = soft_threshold(z, rho[j]) / wjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        wb.noalias() += delta * w.col(j);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
      max_beta = std::max(max_beta, std::abs(updated));
    }
    const bool small = max_change <= tol * (1.0 + max_beta);
    if (small && full) {
      st.converged = true;
      break;
    }
    // Iterate on the active set until it settles, then re-check everything.
    full = small;
  }
  return st;
}

void check_square_same(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix dimensions differ");
}

}  // namespace

std::vector<double> lasso_cd(const SymMatrix& q, std::span<const double> b, std::span<const double> rho,
                             std::span<const double> beta0, double inner_tol, int max_sweeps) {
  const Index n = q.dim();
  if (static_cast<Index>(b.size()) != n || static_cast<Index>(rho.size()) != n ||
      static_cast<Index>(beta0.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "lasso_cd vector lengths");
  }
  if (!(inner_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "inner_tol must be > 0");
  for (double r : rho)
    if (!(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rho must be >= 0");
  if (!is_positive_definite(q)) throw Error(ErrorKind::NotPositiveDefinite, "lasso_cd: q");

  Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(beta0.data(), n);
  Eigen::VectorXd wb = q.dense() * beta;
  const auto st = column_lasso(q.dense(), -1, b.data(), rho.data(), beta, wb, inner_tol, 10 * max_sweeps);
  if (!st.converged) {
    throw Error(ErrorKind::NonConvergence, "lasso_cd after " + std::to_string(st.sweeps) + " sweeps");
  }
  return {beta.data(), beta.data() + n};
}

GlassoSolution glasso_fit(const SymMatrix& s, const PenaltySpec& penalty, const GlassoOptions& opts,
                          const GlassoSolution* warm) {
  if (!(opts.tol > 0.0) || !(opts.inner_tol > 0.0) || opts.max_sweeps < 1) {
    throw Error(ErrorKind::InvalidArgument, "glasso options");
  }
  const Index p = s.dim();
  const Eigen::MatrixXd& sd = s.dense();
  for (Index i = 0; i < p; ++i)
    if (!(sd(i, i) > 0.0)) throw Error(ErrorKind::InvalidArgument, "glasso: S needs a positive diagonal");
  const Eigen::MatrixXd lam = penalty.dense(p);

  Eigen::MatrixXd w = sd;
  if (opts.penalize_diagonal) w.diagonal() += lam.diagonal();
  if (!is_positive_definite(SymMatrix(w))) {
    throw Error(ErrorKind::NotPositiveDefinite, "glasso: initial covariance S + diag(Lambda)");
  }

  // Column i of `coef` holds the regression of column i on the others.
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(p, p);
  if (warm) {
    if (warm->omega.dim() != p) throw Error(ErrorKind::DimensionMismatch, "warm start dimension");
    const Eigen::VectorXd diag = w.diagonal();
    w = warm->sigma.dense();
    w.diagonal() = diag;
    const Eigen::MatrixXd& om = warm->omega.dense();
    for (Index i = 0; i < p; ++i) {
      coef.col(i) = -om.col(i) / om(i, i);
      coef(i, i) = 0.0;
    }
  }

  double mean_abs_off = 0.0;
  if (p > 1) mean_abs_off = (sd.cwiseAbs().sum() - sd.diagonal().cwiseAbs().sum()) / double(p * (p - 1));
  const double threshold = opts.tol * mean_abs_off;

  GlassoSolution out;
  Eigen::MatrixXd best_w = w;
  Eigen::MatrixXd best_coef = coef;
  double best_change = std::numeric_limits<double>::infinity();

  Eigen::VectorXd beta(p);
  Eigen::VectorXd wb(p);
  bool lasso_ok = true;
  for (int sweep = 1; sweep <= opts.max_sweeps && p > 1; ++sweep) {
    double change = 0.0;
    for (Index i = 0; i < p; ++i) {
      beta = coef.col(i);
      beta[i] = 0.0;
      wb.setZero();
      for (Index j = 0; j < p; ++j)
        if (beta[j] != 0.0) wb.noalias() += beta[j] * w.col(j);
      const auto st = column_lasso(w, i, sd.col(i).data(), lam.col(i).data(), beta, wb, opts.inner_tol,
                                   10 * opts.max_sweeps);
      lasso_ok = lasso_ok && st.converged;
      for (Index j = 0; j < p; ++j) {
        if (j == i) continue;
        change += std::abs(wb[j] - w(j, i));
        w(j, i) = wb[j];
        w(i, j) = wb[j];
      }
      coef.col(i) = beta;
    }
    out.sweeps = sweep;
    const double mean_change = change / double(p * (p - 1));
    if (mean_change < best_change) {
      best_change = mean_change;
      best_w = w;
      best_coef = coef;
    }
    if (mean_change <= threshold) {
      out.converged = lasso_ok;
      break;
    }
  }
  if (p <= 1) out.converged = true;
  if (!out.converged) {
    w = best_w;
    coef = best_coef;
  }

  // Recover Omega from (W, beta):  omega_ii = 1 / (w_ii - w_12' beta),  omega_12 = -beta omega_ii.
  Eigen::MatrixXd om(p, p);
  for (Index i = 0; i < p; ++i) {
    double quad = 0.0;
    for (Index j = 0; j < p; ++j)
      if (j != i) quad += w(j, i) * coef(j, i);
    const double oii = 1.0 / (w(i, i) - quad);
    om.col(i) = -coef.col(i) * oii;
    om(i, i) = oii;
  }
  out.omega = SymMatrix(om);
  out.sigma = SymMatrix(w);
  if (!is_positive_definite(out.omega)) {
    throw Error(ErrorKind::NotPositiveDefinite, "glasso: recovered precision matrix");
  }
  out.kkt_residual = kkt_residual(out.omega, s, penalty);
  return out;
}

double kkt_residual(const SymMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty) {
  check_square_same(omega, s);
  const Index p = s.dim();
  const Eigen::MatrixXd grad = s.dense() - inv_pd(omega).dense();
  const Eigen::MatrixXd lam = penalty.dense(p);
  double worst = 0.0;
  for (Index k = 0; k < p; ++k) {
    for (Index j = 0; j < p; ++j) {
      const double o = omega(j, k);
      const double r = o != 0.0 ? std::abs(grad(j, k) + lam(j, k) * sign(o))
                                : std::max(0.0, std::abs(grad(j, k)) - lam(j, k));
      worst = std::max(worst, r);
    }
  }
  return worst;
}

double neg_loglik(const SymMatrix& omega, const SymMatrix& s) {
  check_square_same(omega, s);
  return -log_det_pd(omega) + omega.dense().cwiseProduct(s.dense()).sum();
}

double objective_penalized(const SymMatrix& omega, const SymMatrix& s, const PenaltySpec& penalty) {
  const double base = neg_loglik(omega, s);
  return base + penalty.dense(s.dim()).cwiseProduct(omega.dense().cwiseAbs()).sum();
}

}  // namespace dcggm
