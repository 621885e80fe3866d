#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dcggm/metrics.hpp"
#include "dcggm/synthetic.hpp"
#include "support.hpp"

using namespace dcggm;
using testing::error_kind;

TEST_CASE("random precision: exact support and unit minimum eigenvalue") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index p = 5 + static_cast<Index>(seed % 4) * 10;
    const Index e = std::min<Index>(static_cast<Index>(seed * 3), p * (p - 1) / 2);
    const auto gt = gen_random_precision(p, e, seed);
    CHECK(static_cast<Index>(gt.support.size()) == e);
    CHECK(edge_support(gt.omega_true, 0.0) == gt.support);
    const auto ev = testing::jacobi_eigenvalues(gt.omega_true.dense());
    CHECK(std::abs(*std::min_element(ev.begin(), ev.end()) - 1.0) <= 1e-6);
    CHECK(is_positive_definite(gt.omega_true));
    CHECK(max_abs_diff(gt.sigma_true, inv_pd(gt.omega_true)) <= 1e-12);
  }
}

TEST_CASE("random precision examples") {
  const auto empty = gen_random_precision(6, 0, 1);
  CHECK(testing::is_diagonal(empty.omega_true));
  CHECK(min_eigenvalue(empty.omega_true) == doctest::Approx(1.0).epsilon(1e-12));
  const auto ten = gen_random_precision(10, 10, 2);
  CHECK(ten.support.size() == 10);
  CHECK(gen_random_precision(10, 10, 2).omega_true == ten.omega_true);
  CHECK(gen_random_precision(10, 10, 3).omega_true != ten.omega_true);
  CHECK(error_kind([] { gen_random_precision(4, 7, 1); }) == ErrorKind::InvalidEdgeCount);
}

TEST_CASE("chain precision examples") {
  const auto base = gen_chain_precision(4, 5, 1);
  CHECK(base.omega_true ==
        SymMatrix::from_rows({{1, .5, .25, 0}, {.5, 1, .5, .25}, {.25, .5, 1, .5}, {0, .25, .5, 1}}));
  const EdgeSet expected{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(edge_support(base.omega_true) == expected);

  const auto fifty = gen_chain_precision(50, 30, 7);
  CHECK(fifty.support.size() == 30);
  for (const auto& [j, k] : fifty.support) {
    CHECK(k - j <= 2);
    const double w = fifty.omega_true(j, k);
    CHECK((w == 0.5 || w == 0.25));
    CHECK(w == (k - j == 1 ? 0.5 : 0.25));
  }
  CHECK(error_kind([] { gen_chain_precision(10, 18, 1); }) == ErrorKind::InvalidEdgeCount);
}

TEST_CASE("chain precision: full band for small p is unchanged") {
  for (Index p : {3, 4, 5, 6}) {
    const auto gt = gen_chain_precision(p, 2 * p - 3, 11);
    CHECK(static_cast<Index>(gt.support.size()) == 2 * p - 3);
  }
}

TEST_CASE("sample_mvn") {
  const auto x = sample_mvn(SymMatrix::identity(3), 10000, 5);
  CHECK(x.rows() == 10000);
  CHECK(max_abs_diff(sample_covariance(x), SymMatrix::identity(3)) <= 0.1);
  const auto one = sample_mvn(SymMatrix::identity(4), 1, 5);
  CHECK(one.rows() == 1);
  CHECK(one.allFinite());
  CHECK(sample_mvn(SymMatrix::identity(3), 20, 9) == sample_mvn(SymMatrix::identity(3), 20, 9));
}

TEST_CASE("sample_mvn reproduces a correlated covariance") {
  const auto gt = gen_chain_precision(5, 7, 3);
  const auto x = sample_mvn(gt.sigma_true, 40000, 8);
  CHECK(max_abs_diff(sample_covariance(x), gt.sigma_true) <= 0.06);
}

TEST_CASE("sample_covariance") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, -1, 0;
  CHECK(sample_covariance(x) == SymMatrix::from_rows({{1, 0}, {0, 0}}));
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(5, 3, 2.5);
  CHECK(sample_covariance(c) == SymMatrix(3));
  CHECK(sample_covariance(Eigen::MatrixXd::Constant(1, 3, 4.0)) == SymMatrix(3));
}

TEST_CASE("shrink_covariance: minimal grid rule") {
  const SymMatrix good = testing::random_spd(6, 4);
  const auto a = shrink_covariance(good);
  CHECK(a.zeta == 0.0);
  CHECK(a.s == good);
  const SymMatrix diag = SymMatrix::diagonal({1, 2, 3});
  CHECK(shrink_covariance(diag).zeta == 0.0);
  CHECK(shrink_covariance(diag).s == diag);

  const auto gt = gen_random_precision(20, 15, 3);
  const SymMatrix raw = sample_covariance(sample_mvn(gt.sigma_true, 10, 4));
  CHECK_FALSE(is_positive_definite(raw));
  const auto fixed = shrink_covariance(raw);
  CHECK(fixed.zeta > 0.0);
  CHECK(is_positive_definite(fixed.s));
  for (Index i = 0; i < 20; ++i) CHECK(fixed.s(i, i) == raw(i, i));
  CHECK(error_kind([] { shrink_covariance(SymMatrix(3)); }) == ErrorKind::ShrinkageFailed);
}

TEST_CASE("optimal shrinkage intensity tracks the Monte Carlo optimum") {
  // For a fixed Sigma, find the zeta minimizing the average Frobenius loss over
  // many sample covariances, and compare with the average of the estimates.
  const auto gt = gen_chain_precision(12, 15, 5);
  const Index n = 30;
  const int reps = 300;
  std::vector<double> loss(101, 0.0);
  double est = 0.0;
  for (int r = 0; r < reps; ++r) {
    const SymMatrix s = sample_covariance(sample_mvn(gt.sigma_true, n, 1000 + static_cast<std::uint64_t>(r)));
    est += optimal_shrinkage_intensity(s, n) / reps;
    Eigen::MatrixXd off = s.dense();
    off.diagonal().setZero();
    Eigen::MatrixXd target = gt.sigma_true.dense();
    target.diagonal().setZero();
    for (int g = 0; g <= 100; ++g) loss[static_cast<std::size_t>(g)] += ((1.0 - g / 100.0) * off - target).squaredNorm();
  }
  const double best = std::distance(loss.begin(), std::min_element(loss.begin(), loss.end())) / 100.0;
  CHECK(std::abs(est - best) <= 0.06);
}

TEST_CASE("shrink_covariance with sample size") {
  const SymMatrix diag = SymMatrix::diagonal({1, 2, 3});
  const auto d = shrink_covariance(diag, 50);
  CHECK(is_positive_definite(d.s));
  CHECK(d.s == diag);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto gt = gen_random_precision(30, 20, seed);
    const SymMatrix raw = sample_covariance(sample_mvn(gt.sigma_true, 15, seed + 50));
    const auto sh = shrink_covariance(raw, 15);
    CHECK(sh.zeta >= shrink_covariance(raw).zeta);
    CHECK(sh.zeta <= 1.0);
    CHECK(is_positive_definite(sh.s));
  }
}

TEST_CASE("make_dataset") {
  const auto [gt1, ds1] = make_dataset(GraphKind::chain, 50, 100, 30, 7);
  const auto [gt2, ds2] = make_dataset(GraphKind::chain, 50, 100, 30, 7);
  CHECK(ds1.s == ds2.s);
  CHECK(ds1.x == ds2.x);
  CHECK(gt1.omega_true == gt2.omega_true);
  CHECK(gt1.support.size() == 30);
  CHECK(ds1.x.rows() == 100);

  const auto [gt3, ds3] = make_dataset(GraphKind::random, 50, 25, 30, 7);
  CHECK(is_positive_definite(ds3.s));
  CHECK(ds3.zeta > 0.0);
  CHECK(is_positive_definite(gt3.omega_true));
}

TEST_CASE("graph kind names") {
  CHECK(parse_graph_kind("chain") == GraphKind::chain);
  CHECK(to_string(GraphKind::random) == "random");
  CHECK(error_kind([] { parse_graph_kind("grid"); }) == ErrorKind::InvalidArgument);
}
