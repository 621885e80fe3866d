#include "dcggm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dcggm {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index p) {
  SymMatrix out(p);
  out.m_.diagonal().setOnes();
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) throw Error(ErrorKind::InvalidArgument, "non-finite diagonal");
    out.m_(i, i) = d[i];
  }
  return out;
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto p = static_cast<Index>(rows.size());
  Eigen::MatrixXd m(p, p);
  Index j = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != p) {
      throw Error(ErrorKind::DimensionMismatch, "ragged row in matrix literal");
    }
    Index k = 0;
    for (double v : row) m(j, k++) = v;
    ++j;
  }
  return SymMatrix(m);
}

SymMatrix SymMatrix::unvec(std::span<const double> values, Index p) {
  if (static_cast<Index>(values.size()) != p * p) {
    throw Error(ErrorKind::DimensionMismatch, "unvec length is not p*p");
  }
  Eigen::MatrixXd m(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) m(j, k) = values[j * p + k];
  return SymMatrix(m);
}

FlatVector SymMatrix::vec() const {
  const Index p = dim();
  FlatVector out(static_cast<std::size_t>(p * p));
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) out[j * p + k] = m_(j, k);
  return out;
}

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return SymMatrix(Eigen::MatrixXd(a.dense() + b.dense()));
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return SymMatrix(Eigen::MatrixXd(a.dense() - b.dense()));
}

SymMatrix operator*(double c, const SymMatrix& a) { return SymMatrix(Eigen::MatrixXd(c * a.dense())); }

Eigen::MatrixXd cholesky(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "Cholesky pivot <= 0");
  return llt.matrixL();
}

double min_cholesky_pivot(const SymMatrix& a) {
  if (a.dim() == 0) return 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success) return 0.0;
  return llt.matrixLLT().diagonal().array().square().minCoeff();
}

bool is_positive_definite(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  return llt.info() == Eigen::Success;
}

double log_det_pd(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "log_det_pd");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

SymMatrix inv_pd(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "inv_pd");
  return SymMatrix(Eigen::MatrixXd(llt.solve(Eigen::MatrixXd::Identity(a.dim(), a.dim()))));
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  if (a.dim() == 0) return 0.0;
  return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

double frobenius_sq_diff(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return (a.dense() - b.dense()).squaredNorm();
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw Error(ErrorKind::InvalidK, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
}

// Indices ordered by descending |v|, then ascending index.
std::vector<std::size_t> magnitude_order(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

}  // namespace

double largest_k_norm(std::span<const double> v, std::size_t k) {
  check_k(k, v.size());
  std::vector<double> mags(v.size());
  std::transform(v.begin(), v.end(), mags.begin(), [](double x) { return std::abs(x); });
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k - 1), mags.end(),
                   std::greater<>());
  // nth_element leaves the k largest in front (unordered).
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += mags[i];
  return s;
}

FlatVector topk_sign_subgradient(std::span<const double> v, std::size_t k,
                                 std::span<const std::size_t> forced) {
  check_k(k, v.size());
  if (forced.size() > k) throw Error(ErrorKind::InvalidK, "more forced indices than k");
  FlatVector s(v.size(), 0.0);
  std::vector<char> taken(v.size(), 0);
  for (std::size_t i : forced) {
    if (i >= v.size()) throw Error(ErrorKind::InvalidArgument, "forced index out of range");
    s[i] = sign(v[i]);
    taken[i] = 1;
  }
  std::size_t remaining = k - forced.size();
  for (std::size_t i : magnitude_order(v)) {
    if (remaining == 0) break;
    if (taken[i]) continue;
    s[i] = sign(v[i]);
    --remaining;
  }
  return s;
}

}  // namespace dcggm
