#include "pabm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace pabm {

std::vector<std::vector<long>> confusion_matrix(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw DimensionError("confusion_matrix: assignments differ in length");
  std::vector<std::vector<long>> c(static_cast<std::size_t>(a.communities()),
                                   std::vector<long>(static_cast<std::size_t>(b.communities()), 0));
  for (int i = 0; i < a.size(); ++i) ++c[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
  return c;
}

long max_matching_exhaustive(const std::vector<std::vector<long>>& weights) {
  const std::size_t K = weights.size();
  std::vector<std::size_t> perm(K);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  long best = std::numeric_limits<long>::min();
  do {
    long total = 0;
    for (std::size_t r = 0; r < K; ++r) total += weights[r][perm[r]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

long max_matching_hungarian(const std::vector<std::vector<long>>& weights) {
  // Shortest augmenting path with potentials on cost = -weight, 1-based.
  const std::size_t K = weights.size();
  if (K == 0) return 0;
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  std::vector<long> u(K + 1, 0), v(K + 1, 0);
  std::vector<std::size_t> match(K + 1, 0), way(K + 1, 0);
  for (std::size_t row = 1; row <= K; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<long> minv(K + 1, kInf);
    std::vector<bool> used(K + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = match[col0];
      long delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= K; ++c) {
        if (used[c]) continue;
        const long cur = -weights[r0 - 1][c - 1] - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= K; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  long total = 0;
  for (std::size_t c = 1; c <= K; ++c) total += weights[match[c] - 1][c - 1];
  return total;
}

double clustering_error(const Assignment& z, const Assignment& z_star, MatchMethod method) {
  if (z.size() != z_star.size()) throw DimensionError("clustering_error: assignments differ in length");
  if (z.communities() != z_star.communities())
    throw DimensionError("clustering_error: K mismatch (" + std::to_string(z.communities()) + " vs " +
                         std::to_string(z_star.communities()) + ")");
  const auto confusion = confusion_matrix(z, z_star);
  if (method == MatchMethod::kAuto)
    method = z.communities() <= 8 ? MatchMethod::kExhaustive : MatchMethod::kHungarian;
  const long matched = method == MatchMethod::kExhaustive ? max_matching_exhaustive(confusion)
                                                          : max_matching_hungarian(confusion);
  return static_cast<double>(z.size() - matched) / static_cast<double>(z.size());
}

double adjusted_rand_index(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw DimensionError("adjusted_rand_index: assignments differ in length");
  auto comb2 = [](long x) { return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0; };
  const auto table = confusion_matrix(a, b);
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  std::vector<long> col(static_cast<std::size_t>(b.communities()), 0);
  for (const auto& row : table) {
    long row_total = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      index += comb2(row[c]);
      row_total += row[c];
      col[c] += row[c];
    }
    sum_a += comb2(row_total);
  }
  for (long c : col) sum_b += comb2(c);
  const double pairs = comb2(a.size());
  const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return a.canonical() == b.canonical() ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace pabm
