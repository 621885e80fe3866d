#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "dcggm/matrix.hpp"

namespace dcggm {

enum class GraphKind { random, chain };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

using EdgePair = std::pair<Index, Index>;  // (j, k), j < k, 0-based
using EdgeSet = std::vector<EdgePair>;     // sorted

struct GroundTruth {
  SymMatrix omega_true;
  SymMatrix sigma_true;
  EdgeSet support;
  GraphKind kind = GraphKind::random;
  std::uint64_t seed = 0;
  Index n_nonzero = 0;
};

struct Dataset {
  Eigen::MatrixXd x;  // n x p samples
  SymMatrix s;        // shrunk sample covariance
  double zeta = 0.0;
  Index n = 0;
  std::uint64_t seed = 0;
};

/// Symmetrized Gaussian matrix with exactly `n_edges` random off-diagonal
/// pairs kept, shifted so its smallest eigenvalue is 1.
GroundTruth gen_random_precision(Index p, Index n_edges, std::uint64_t seed);

/// Banded 1 / 0.5 / 0.25 matrix with base edges zeroed at random down to `n_edges`.
GroundTruth gen_chain_precision(Index p, Index n_edges, std::uint64_t seed);

Eigen::MatrixXd sample_mvn(const SymMatrix& sigma, Index n, std::uint64_t seed);

/// 1/n-normalized covariance about the sample mean.
SymMatrix sample_covariance(const Eigen::MatrixXd& x);

struct Shrunk {
  SymMatrix s;
  double zeta = 0.0;
};

/// zeta * diag(S) + (1 - zeta) * S with the smallest zeta on {0, 0.01, ..., 1}
/// whose Cholesky pivots all reach 1e-8 * mean(diag S).
Shrunk shrink_covariance(const SymMatrix& s);

/// Stein-type intensity towards diag(S) minimizing the expected squared
/// Frobenius loss, estimated from S and the sample size n; clamped to [0, 1].
double optimal_shrinkage_intensity(const SymMatrix& s, Index n);

/// Shrinkage at the optimal intensity, raised to the first grid value whose
/// pivots pass when that intensity is not enough for positive definiteness.
Shrunk shrink_covariance(const SymMatrix& s, Index n);

std::pair<GroundTruth, Dataset> make_dataset(GraphKind kind, Index p, Index n, Index n_edges, std::uint64_t seed);

double min_eigenvalue(const SymMatrix& a);

}  // namespace dcggm
