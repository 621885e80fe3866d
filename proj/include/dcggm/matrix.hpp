#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dcggm/error.hpp"

namespace dcggm {

using Index = Eigen::Index;
using FlatVector = std::vector<double>;

/// Dense symmetric p x p matrix (S, Sigma, Omega, V all live here).
///
/// Construction symmetrizes the input as (A + A^T) / 2 and rejects
/// non-square or non-finite data, so every instance satisfies exact symmetry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Index p) : m_(Eigen::MatrixXd::Zero(p, p)) {}
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(Index p);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Inverse of vec(): row-major p*p values.
  static SymMatrix unvec(std::span<const double> values, Index p);

  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index j, Index k) const { return m_(j, k); }
  /// Writes both (j,k) and (k,j).
  void set(Index j, Index k, double v) {
    m_(j, k) = v;
    m_(k, j) = v;
  }
  const Eigen::MatrixXd& dense() const noexcept { return m_; }

  /// Row-major flattening; equals column-major for a symmetric matrix.
  FlatVector vec() const;
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double c, const SymMatrix& a);

/// Lower-triangular Cholesky factor; throws NotPositiveDefinite if any pivot <= 0.
Eigen::MatrixXd cholesky(const SymMatrix& a);

/// Smallest Cholesky pivot (L_jj^2); 0 when the factorization fails.
double min_cholesky_pivot(const SymMatrix& a);

double log_det_pd(const SymMatrix& a);
SymMatrix inv_pd(const SymMatrix& a);
bool is_positive_definite(const SymMatrix& a);

/// Max-norm of the difference.
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);
double frobenius_sq_diff(const SymMatrix& a, const SymMatrix& b);

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

inline double sign(double x) { return (x > 0.0) - (x < 0.0); }

double l1_norm(std::span<const double> v);
/// Sum of the k largest absolute values; throws InvalidK unless 1 <= k <= |v|.
double largest_k_norm(std::span<const double> v, std::size_t k);

/// Subgradient of the largest-k norm: sign(v_i) on the forced indices and on
/// the (k - |forced|) remaining largest |v_i| (ties: smaller index first).
FlatVector topk_sign_subgradient(std::span<const double> v, std::size_t k,
                                 std::span<const std::size_t> forced = {});

}  // namespace dcggm
