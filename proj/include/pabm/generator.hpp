#pragma once

#include "pabm/core.hpp"

#include <cstdint>
#include <vector>

namespace pabm {

// Lambda ~ U(0, a), off-diagonal blocks scaled by omega.
struct DiverseConfig {
  int n = 600;
  int K = 4;
  double a = 1.0;
  double omega = 0.9;
  std::uint64_t seed = 1;

  void validate() const;
};

// Two equal communities; factor hi for a random half of each, lo for the rest.
struct HomophilyConfig {
  int n = 300;
  double h = 2.0;
  double hi = 0.8;
  double lo = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PabmInstance {
  PabmParams params;
  MatrixXd P;
  MatrixXd A;
  Assignment truth;
  std::uint64_t seed = 0;
  // scramble[p] = node placed at block-ordered position p. Diagnostics only.
  std::vector<int> scramble;
};

PabmInstance gen_diverse(const DiverseConfig& cfg);
PabmInstance gen_homophily(const HomophilyConfig& cfg);

// Lower triangle A_ij ~ Ber(P_ij), mirrored; zero diagonal.
MatrixXd sample_adjacency(const MatrixXd& p, std::uint64_t seed);

// max_{ij} P_ij.
template <typename Derived>
typename Derived::Scalar sparsity_level(const Eigen::MatrixBase<Derived>& p) {
  if (p.size() == 0) return typename Derived::Scalar(0);
  return p.maxCoeff();
}

// Community sizes n/K with the remainder going to the lowest-indexed communities.
std::vector<int> balanced_sizes(int n, int K);

}  // namespace pabm
