#pragma once

#include "pabm/core.hpp"

#include <cstdint>
#include <vector>

namespace pabm {

struct SSCConfig {
  int max_nonzeros = 0;         // L; 0 means "use K"
  double residual_tol = 1e-10;  // OMP stops once ||residual|| <= tol
  int kmeans_restarts = 20;
  std::uint64_t seed = 1;
  // Noiseless recovery only: S_ij counts as an edge when S_ij > edge_tol * max(S).
  double edge_tol = 1e-8;
  // Noiseless recovery only: rank cut-off for the column-space bases and the
  // largest principal-angle sine under which two subspaces are merged.
  double rank_tol = 1e-8;
  double angle_tol = 1e-6;
};

struct OmpColumn {
  std::vector<Index> support;          // in selection order
  std::vector<double> coefficients;    // aligned with `support`
  std::vector<double> residual_norms;  // after 0, 1, ... selections
  bool isolated = false;               // column was identically zero
};

// Greedy sparse self-representation of column j of A by at most L other
// columns, refitting least squares on the support after every selection.
OmpColumn omp_column(const MatrixXd& a, Index j, int L, double tol);

struct SimilarityMatrix {
  MatrixXd weights;     // W, column j from omp_column
  MatrixXd similarity;  // |W| + |W^T|
};

SimilarityMatrix self_representation(const MatrixXd& a, const SSCConfig& cfg, int K);

// Normalized spectral clustering of a nonnegative affinity matrix.
Assignment spectral_cluster(const MatrixXd& s, int K, int restarts, std::uint64_t seed);

// Spectral clustering of the SSC affinity |W| + |W^T|.
Assignment ssc_cluster(const MatrixXd& a, int K, const SSCConfig& cfg);

struct NoiselessResult {
  Assignment assignment;
  std::vector<MatrixXd> bases;  // orthonormal basis of each recovered subspace
};

// Population-level recovery: similarity-graph components merged by column space.
NoiselessResult noiseless_ssc(const MatrixXd& p, int K, const SSCConfig& cfg);

// Connected components of the graph {(i,j) : s_ij > threshold}, labelled
// in order of their smallest node.
std::vector<int> connected_components(const MatrixXd& s, double threshold, int& count);

}  // namespace pabm
