#include "dcggm/dc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dcggm {

namespace {

void check_k(Index k, Index p) {
  if (k < p || k > p * p) {
    throw Error(ErrorKind::InvalidK,
                "k=" + std::to_string(k) + " outside [" + std::to_string(p) + ", " + std::to_string(p * p) + "]");
  }
}

}  // namespace

SymMatrix subgradient_matrix(const SymMatrix& omega_t, Index k) {
  const Index p = omega_t.dim();
  check_k(k, p);
  const Eigen::MatrixXd& om = omega_t.dense();

  struct Pair {
    double mag;
    Index flat;  // j * p + k of the upper entry
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
  for (Index j = 0; j < p; ++j)
    for (Index c = j + 1; c < p; ++c) pairs.push_back({std::abs(om(j, c)), j * p + c});

  // Two slots per pair; an odd leftover slot stays empty so V remains symmetric.
  const auto take = static_cast<std::size_t>((k - p) / 2);
  const auto cmp = [](const Pair& a, const Pair& b) { return a.mag != b.mag ? a.mag > b.mag : a.flat < b.flat; };
  const std::size_t n = std::min(take, pairs.size());
  std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(n), pairs.end(), cmp);

  SymMatrix v(p);
  for (Index i = 0; i < p; ++i) v.set(i, i, sign(om(i, i)));
  for (std::size_t t = 0; t < n; ++t) {
    const Index j = pairs[t].flat / p;
    const Index c = pairs[t].flat % p;
    v.set(j, c, sign(om(j, c)));
  }
  return v;
}

double select_eta(const SymMatrix& s, const SymMatrix& v, double alpha, double eta_min) {
  if (s.dim() != v.dim()) throw Error(ErrorKind::DimensionMismatch, "select_eta");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be in (0,1)");
  if (s.dim() == 0) throw Error(ErrorKind::InvalidArgument, "select_eta: empty matrix");
  const double eta0 = s.dense().diagonal().minCoeff();
  if (!(eta0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "select_eta: S needs a positive diagonal");
  for (double eta = eta0; eta >= eta_min; eta *= alpha) {
    if (is_positive_definite(s - eta * v)) return eta;
  }
  throw Error(ErrorKind::EtaUnderflow, "no eta >= " + std::to_string(eta_min) + " makes S - eta V positive definite");
}

double constraint_gap(const SymMatrix& omega, Index k) {
  check_k(k, omega.dim());
  const FlatVector v = omega.vec();
  return l1_norm(v) - largest_k_norm(v, static_cast<std::size_t>(k));
}

double dc_objective(const SymMatrix& omega, const SymMatrix& s, double eta, Index k) {
  return neg_loglik(omega, s) + eta * constraint_gap(omega, k);
}

double dc_linearized_objective(const SymMatrix& omega, const SymMatrix& s, double eta, const SymMatrix& v) {
  const Eigen::MatrixXd& om = omega.dense();
  return neg_loglik(omega, s) + eta * om.cwiseAbs().sum() - eta * om.cwiseProduct(v.dense()).sum();
}

DcStep dc_step(const SymMatrix& s, const SymMatrix& omega_t, const DcOptions& opts) {
  DcStep step;
  step.v = subgradient_matrix(omega_t, opts.k);
  step.eta = select_eta(s, step.v, opts.alpha, opts.eta_min);
  step.shifted = s - step.eta * step.v;
  step.sub = glasso_fit(step.shifted, PenaltySpec(step.eta), opts.inner);
  return step;
}

DcSolution dc_fit(const SymMatrix& s, const DcOptions& opts) {
  const Index p = s.dim();
  check_k(opts.k, p);
  if (!(opts.eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be > 0");
  if (opts.max_outer < 1) throw Error(ErrorKind::InvalidArgument, "max_outer must be >= 1");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be in (0,1)");

  DcSolution out;
  out.k = opts.k;
  SymMatrix omega = inv_pd(s + SymMatrix::identity(p));
  if (opts.keep_iterates) out.iterates.push_back(omega);

  for (int t = 0; t < opts.max_outer; ++t) {
    DcStep step = dc_step(s, omega, opts);
    DcIteration it;
    it.eta = step.eta;
    it.objective_start = dc_objective(omega, s, step.eta, opts.k);
    it.objective = dc_objective(step.sub.omega, s, step.eta, opts.k);
    it.frob_step = frobenius_sq_diff(step.sub.omega, omega);
    it.constraint_gap = constraint_gap(step.sub.omega, opts.k);
    it.inner_sweeps = step.sub.sweeps;
    it.inner_converged = step.sub.converged;
    it.inner_kkt = step.sub.kkt_residual;
    out.trace.push_back(it);

    omega = std::move(step.sub.omega);
    if (opts.keep_iterates) out.iterates.push_back(omega);
    if (it.frob_step < opts.eps) {
      out.converged = true;
      break;
    }
  }
  out.omega = std::move(omega);
  return out;
}

}  // namespace dcggm
