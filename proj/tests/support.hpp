#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dcggm/matrix.hpp"
#include "dcggm/random.hpp"

namespace testing {

template <class F>
std::optional<dcggm::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const dcggm::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

using dcggm::Index;
using dcggm::SymMatrix;

inline Eigen::MatrixXd gaussian(Index rows, Index cols, std::uint64_t seed) {
  dcggm::CounterRng rng(seed);
  Eigen::MatrixXd x(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x(i, j) = rng.next_normal();
  return x;
}

/// A A^T / p + ridge I: SPD with eigenvalues bounded below by `ridge`.
inline SymMatrix random_spd(Index p, std::uint64_t seed, double ridge = 0.1) {
  const Eigen::MatrixXd a = gaussian(p, p, seed);
  Eigen::MatrixXd m = a * a.transpose() / double(p);
  m.diagonal().array() += ridge;
  return SymMatrix(m);
}

/// Covariance-like SPD matrix from 2p Gaussian rows (what the solvers see in practice).
inline SymMatrix random_covariance(Index p, std::uint64_t seed) {
  const Eigen::MatrixXd x = gaussian(2 * p, p, seed);
  Eigen::MatrixXd s = x.transpose() * x / double(2 * p);
  s.diagonal().array() += 0.05;
  return SymMatrix(s);
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  dcggm::CounterRng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.next_normal();
  return v;
}

/// Cyclic Jacobi eigenvalues; independent of the library's factorizations.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  return ev;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const Index n = a.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Index c = 0; c < n; ++c) {
    Index piv = c;
    for (Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    a.row(c).swap(a.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

/// Brute-force KKT check of the l1-penalized likelihood, written independently
/// of kkt_residual: G = S - Omega^{-1} must equal -lambda sign(w) on the support
/// and lie in [-lambda, lambda] off it.
inline double brute_kkt(const SymMatrix& omega, const SymMatrix& s, const Eigen::MatrixXd& lambda) {
  const Eigen::MatrixXd g = s.dense() - gauss_jordan_inverse(omega.dense());
  double worst = 0.0;
  for (Index j = 0; j < g.rows(); ++j) {
    for (Index k = 0; k < g.cols(); ++k) {
      const double w = omega(j, k);
      const double r = w != 0.0 ? std::abs(g(j, k) + lambda(j, k) * (w > 0 ? 1.0 : -1.0))
                                : std::max(0.0, std::abs(g(j, k)) - lambda(j, k));
      worst = std::max(worst, r);
    }
  }
  return worst;
}

inline bool is_diagonal(const SymMatrix& m, double tol = 0.0) {
  for (Index j = 0; j < m.dim(); ++j)
    for (Index k = j + 1; k < m.dim(); ++k)
      if (std::abs(m(j, k)) > tol) return false;
  return true;
}

}  // namespace testing
