#pragma once

#include "pabm/core.hpp"

#include <vector>

namespace pabm {

enum class MatchMethod { kAuto, kExhaustive, kHungarian };

// K x K confusion counts, rows indexed by labels of `a`, columns by `b`.
std::vector<std::vector<long>> confusion_matrix(const Assignment& a, const Assignment& b);

// Maximum total weight of a perfect matching on a square weight table.
long max_matching_exhaustive(const std::vector<std::vector<long>>& weights);
long max_matching_hungarian(const std::vector<std::vector<long>>& weights);

// Proportion of misclassified nodes minimized over label permutations.
// kAuto enumerates permutations for K <= 8 and uses the Hungarian method above.
double clustering_error(const Assignment& z, const Assignment& z_star, MatchMethod method = MatchMethod::kAuto);

// n^{-2} ||P_hat - P||_F^2.
template <typename DerivedA, typename DerivedB>
double estimation_error(const Eigen::MatrixBase<DerivedA>& p_hat, const Eigen::MatrixBase<DerivedB>& p) {
  if (p_hat.rows() != p.rows() || p_hat.cols() != p.cols())
    throw DimensionError("estimation_error: shape mismatch");
  const double n = static_cast<double>(p.rows());
  return (p_hat - p).squaredNorm() / (n * n);
}

// Hubert-Arabie adjusted Rand index.
double adjusted_rand_index(const Assignment& a, const Assignment& b);

// Proportion of nonzero entries.
template <typename Derived>
double density(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  return static_cast<double>((a.array() != typename Derived::Scalar(0)).count()) / static_cast<double>(a.size());
}

struct EvalReport {
  double clustering_error = 0.0;
  double estimation_error = 0.0;
  double ari = 0.0;
  double density = 0.0;
};

}  // namespace pabm
