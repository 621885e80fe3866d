#include "dcggm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcggm/random.hpp"

namespace dcggm {

std::string_view to_string(GraphKind kind) { return kind == GraphKind::random ? "random" : "chain"; }

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "random") return GraphKind::random;
  if (name == "chain") return GraphKind::chain;
  throw Error(ErrorKind::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

double min_eigenvalue(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.dense(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

namespace {

EdgeSet support_of(const SymMatrix& omega) {
  EdgeSet out;
  for (Index j = 0; j < omega.dim(); ++j)
    for (Index k = j + 1; k < omega.dim(); ++k)
      if (omega(j, k) != 0.0) out.emplace_back(j, k);
  return out;
}

// First `count` entries of a seeded shuffle of 0..n-1, sorted.
std::vector<std::size_t> choose_subset(std::size_t n, std::size_t count, std::uint64_t seed) {
  auto perm = permutation(n, seed);
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

GroundTruth finish(SymMatrix omega, GraphKind kind, std::uint64_t seed) {
  GroundTruth gt;
  gt.sigma_true = inv_pd(omega);
  gt.support = support_of(omega);
  gt.n_nonzero = static_cast<Index>(gt.support.size());
  gt.omega_true = std::move(omega);
  gt.kind = kind;
  gt.seed = seed;
  return gt;
}

}  // namespace

GroundTruth gen_random_precision(Index p, Index n_edges, std::uint64_t seed) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
  const Index max_edges = p * (p - 1) / 2;
  if (n_edges < 0 || n_edges > max_edges) {
    throw Error(ErrorKind::InvalidEdgeCount,
                "random: n_edges=" + std::to_string(n_edges) + " outside [0, " + std::to_string(max_edges) + "]");
  }
  CounterRng normals(derive_seed(seed, "random-entries"));
  Eigen::MatrixXd a1(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) a1(j, k) = normals.normal_at(static_cast<std::uint64_t>(j * p + k));
  Eigen::MatrixXd a2 = 0.5 * (a1 + a1.transpose());

  std::vector<EdgePair> pairs;
  pairs.reserve(static_cast<std::size_t>(max_edges));
  for (Index j = 0; j < p; ++j)
    for (Index k = j + 1; k < p; ++k) pairs.emplace_back(j, k);
  const auto keep = choose_subset(pairs.size(), static_cast<std::size_t>(n_edges), derive_seed(seed, "random-support"));
  Eigen::MatrixXd sparse = a2.diagonal().asDiagonal();
  for (std::size_t idx : keep) {
    const auto [j, k] = pairs[idx];
    sparse(j, k) = a2(j, k);
    sparse(k, j) = a2(j, k);
  }
  SymMatrix base(sparse);
  const double shift = 1.0 - min_eigenvalue(base);
  Eigen::MatrixXd omega = base.dense();
  omega.diagonal().array() += shift;
  return finish(SymMatrix(omega), GraphKind::random, seed);
}

GroundTruth gen_chain_precision(Index p, Index n_edges, std::uint64_t seed) {
  if (p < 2) throw Error(ErrorKind::InvalidArgument, "chain: p must be >= 2");
  const Index max_edges = 2 * p - 3;
  if (n_edges < 0 || n_edges > max_edges) {
    throw Error(ErrorKind::InvalidEdgeCount,
                "chain: n_edges=" + std::to_string(n_edges) + " outside [0, 2p-3=" + std::to_string(max_edges) + "]");
  }
  std::vector<EdgePair> base_edges;
  for (Index j = 0; j + 1 < p; ++j) base_edges.emplace_back(j, j + 1);
  for (Index j = 0; j + 2 < p; ++j) base_edges.emplace_back(j, j + 2);

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    const auto keep = choose_subset(base_edges.size(), static_cast<std::size_t>(n_edges),
                                    derive_seed(derive_seed(seed, "chain-support"), attempt));
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
    for (std::size_t idx : keep) {
      const auto [j, k] = base_edges[idx];
      const double v = (k - j == 1) ? 0.5 : 0.25;
      omega(j, k) = v;
      omega(k, j) = v;
    }
    SymMatrix om(omega);
    if (is_positive_definite(om)) return finish(std::move(om), GraphKind::chain, seed);
  }
  throw Error(ErrorKind::GenerationFailed, "chain: no positive definite zeroing pattern in 100 attempts");
}

Eigen::MatrixXd sample_mvn(const SymMatrix& sigma, Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample_mvn: n must be >= 1");
  const Eigen::MatrixXd l = cholesky(sigma);
  const Index p = sigma.dim();
  CounterRng rng(seed);
  Eigen::MatrixXd z(p, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) z(j, i) = rng.normal_at(static_cast<std::uint64_t>(i * p + j));
  return (l.triangularView<Eigen::Lower>() * z).transpose();
}

SymMatrix sample_covariance(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw Error(ErrorKind::InvalidArgument, "sample_covariance: no rows");
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  return SymMatrix(Eigen::MatrixXd((centered.transpose() * centered) / double(x.rows())));
}

namespace {

SymMatrix shrink_at(const SymMatrix& s, double zeta) {
  Eigen::MatrixXd m = (1.0 - zeta) * s.dense();
  m.diagonal() = s.dense().diagonal();  // zeta*d + (1-zeta)*d, kept exact
  return SymMatrix(m);
}

double pivot_floor(const SymMatrix& s) {
  if (s.dim() == 0) throw Error(ErrorKind::InvalidArgument, "shrink_covariance: empty matrix");
  const Eigen::VectorXd diag = s.dense().diagonal();
  if (diag.minCoeff() < 0.0) throw Error(ErrorKind::InvalidArgument, "shrink_covariance: negative diagonal");
  return 1e-8 * diag.mean();
}

Shrunk first_pd_on_grid(const SymMatrix& s, int first_step) {
  const double floor = pivot_floor(s);
  for (int step = first_step; step <= 100; ++step) {
    const double zeta = step / 100.0;
    SymMatrix cand = shrink_at(s, zeta);
    if (floor > 0.0 && min_cholesky_pivot(cand) >= floor) return {std::move(cand), zeta};
  }
  throw Error(ErrorKind::ShrinkageFailed, "even the diagonal of S is not positive definite");
}

}  // namespace

Shrunk shrink_covariance(const SymMatrix& s) { return first_pd_on_grid(s, 0); }

double optimal_shrinkage_intensity(const SymMatrix& s, Index n) {
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "optimal_shrinkage_intensity: n must be >= 4");
  // Unbiased estimates of tr(Sigma^2), tr(Sigma)^2 and sum sigma_jj^2 from the
  // Wishart moments of the (n-1)-normalized covariance.
  const double nd = double(n);
  const double m = nd - 1.0;
  const Eigen::MatrixXd su = s.dense() * (nd / m);
  const double a = su.squaredNorm();
  const double b = su.trace() * su.trace();
  const double c = su.diagonal().squaredNorm();
  const double tr_sq = m * (m * a - b) / ((m - 1.0) * (m + 2.0));
  const double sq_tr = b - 2.0 * tr_sq / m;
  const double diag_sq = c / (1.0 + 2.0 / m);
  const double num = tr_sq + sq_tr - 2.0 * diag_sq;
  const double den = nd * tr_sq + sq_tr - (nd + 1.0) * diag_sq;
  if (!(den > 0.0)) return 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

Shrunk shrink_covariance(const SymMatrix& s, Index n) {
  if (n < 4) return first_pd_on_grid(s, 0);
  const double floor = pivot_floor(s);
  const double zeta = optimal_shrinkage_intensity(s, n);
  SymMatrix cand = shrink_at(s, zeta);
  if (floor > 0.0 && min_cholesky_pivot(cand) >= floor) return {std::move(cand), zeta};
  return first_pd_on_grid(s, static_cast<int>(std::ceil(zeta * 100.0)));
}

std::pair<GroundTruth, Dataset> make_dataset(GraphKind kind, Index p, Index n, Index n_edges, std::uint64_t seed) {
  GroundTruth gt = kind == GraphKind::random ? gen_random_precision(p, n_edges, derive_seed(seed, "precision"))
                                             : gen_chain_precision(p, n_edges, derive_seed(seed, "precision"));
  gt.seed = seed;
  Dataset ds;
  ds.n = n;
  ds.seed = seed;
  ds.x = sample_mvn(gt.sigma_true, n, derive_seed(seed, "samples"));
  auto shrunk = shrink_covariance(sample_covariance(ds.x), n);
  ds.s = std::move(shrunk.s);
  ds.zeta = shrunk.zeta;
  return {std::move(gt), std::move(ds)};
}

}  // namespace dcggm
