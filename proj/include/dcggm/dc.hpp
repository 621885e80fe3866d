#pragma once

#include <vector>

#include "dcggm/glasso.hpp"
#include "dcggm/matrix.hpp"

namespace dcggm {

struct DcOptions {
  /// Cardinality budget on vec(Omega), diagonal included, off-diagonal pairs
  /// counted twice: E undirected edges correspond to k = p + 2E.
  Index k = 0;
  double alpha = 0.5;
  double eps = 1e-4;
  int max_outer = 50;
  double eta_min = 1e-12;
  GlassoOptions inner{};
  /// Keep Omega_0 .. Omega_T in the solution (tests and diagnostics).
  bool keep_iterates = false;
};

/// One outer iteration t: the subproblem built at Omega_t and its solution Omega_{t+1}.
struct DcIteration {
  double eta = 0.0;
  /// Penalized objective at Omega_{t+1} with weight eta_t.
  double objective = 0.0;
  /// Same objective at Omega_t (same eta_t); objective <= objective_start is the descent property.
  double objective_start = 0.0;
  double frob_step = 0.0;  // ||Omega_{t+1} - Omega_t||_F^2
  double constraint_gap = 0.0;
  int inner_sweeps = 0;
  bool inner_converged = false;
  double inner_kkt = 0.0;
};

struct DcSolution {
  SymMatrix omega;
  std::vector<DcIteration> trace;
  bool converged = false;
  Index k = 0;
  std::vector<SymMatrix> iterates;  // only with keep_iterates
};

/// Symmetric sign pattern of the top-k entries of vec(omega_t), diagonal forced in.
SymMatrix subgradient_matrix(const SymMatrix& omega_t, Index k);

/// First eta in min(diag s) * alpha^m, m = 0, 1, ... with s - eta v positive definite.
double select_eta(const SymMatrix& s, const SymMatrix& v, double alpha, double eta_min);

/// ||vec(omega)||_1 - largest-k norm of vec(omega).
double constraint_gap(const SymMatrix& omega, Index k);

/// -log|Omega| + tr(Omega S) + eta * constraint_gap(Omega, k)
double dc_objective(const SymMatrix& omega, const SymMatrix& s, double eta, Index k);

/// Convex majorant at the linearization point that produced v:
/// -log|Omega| + tr(Omega S) + eta ||vec Omega||_1 - eta <Omega, V>.
double dc_linearized_objective(const SymMatrix& omega, const SymMatrix& s, double eta, const SymMatrix& v);

struct DcStep {
  SymMatrix v;
  double eta = 0.0;
  SymMatrix shifted;  // S - eta V
  GlassoSolution sub;
};

/// Linearize at omega_t and solve the resulting graphical-lasso subproblem.
DcStep dc_step(const SymMatrix& s, const SymMatrix& omega_t, const DcOptions& opts);

DcSolution dc_fit(const SymMatrix& s, const DcOptions& opts);

}  // namespace dcggm
