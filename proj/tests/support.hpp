#pragma once

#include "pabm/core.hpp"
#include "pabm/random.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace pabm::testing {

inline MatrixXd random_matrix(Rng& rng, Index rows, Index cols, double lo = 0.0, double hi = 1.0) {
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = lo + (hi - lo) * rng.uniform();
  return m;
}

inline MatrixXd random_symmetric(Rng& rng, Index n, double lo = 0.0, double hi = 1.0) {
  MatrixXd m = random_matrix(rng, n, n, lo, hi);
  return (m + m.transpose()) / 2.0;
}

inline MatrixXd random_adjacency(Rng& rng, Index n, double p) {
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) a(i, j) = a(j, i) = rng.uniform() < p ? 1.0 : 0.0;
  return a;
}

// Every community non-empty: the first K nodes of a shuffled order seed one community each.
inline Assignment random_assignment(Rng& rng, int n, int K) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<int> order = rng.permutation(n);
  for (int t = 0; t < n; ++t)
    labels[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] =
        t < K ? t : static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
  return Assignment(std::move(labels), K);
}

// Sizes within one of n/K, in shuffled node order.
inline Assignment balanced_assignment(Rng& rng, int n, int K) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i % K;
  rng.shuffle(labels);
  return Assignment(std::move(labels), K);
}

inline Assignment relabel(const Assignment& a, const std::vector<int>& perm) {
  std::vector<int> labels = a.labels();
  for (int& c : labels) c = perm[static_cast<std::size_t>(c)];
  return Assignment(std::move(labels), a.communities());
}

// Minimum misclassification over all label permutations, by enumeration.
inline double brute_force_error(const Assignment& z, const Assignment& truth) {
  std::vector<int> perm(static_cast<std::size_t>(z.communities()));
  std::iota(perm.begin(), perm.end(), 0);
  int best = z.size();
  do {
    int wrong = 0;
    for (int i = 0; i < z.size(); ++i)
      if (perm[static_cast<std::size_t>(z[i])] != truth[i]) ++wrong;
    best = std::min(best, wrong);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / z.size();
}

}  // namespace pabm::testing
