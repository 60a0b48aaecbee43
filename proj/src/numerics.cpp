#include "pabm/numerics.hpp"

#include "pabm/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>

namespace pabm {
namespace {

SymmetricEigenpairs sorted_descending(const VectorXd& values, const MatrixXd& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) > values(b); });
  SymmetricEigenpairs out{VectorXd(n), MatrixXd(vectors.rows(), n)};
  for (Index c = 0; c < n; ++c) {
    out.values(c) = values(order[c]);
    out.vectors.col(c) = vectors.col(order[c]);
    if (out.vectors.col(c).sum() < 0.0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

double squared_distance(const MatrixXd& x, Index row, const MatrixXd& centers, Index c) {
  return (x.row(row) - centers.row(c)).squaredNorm();
}

struct LloydRun {
  std::vector<int> labels;
  MatrixXd centers;
  double inertia;
};

LloydRun lloyd(const MatrixXd& x, int K, Rng& rng) {
  const Index n = x.rows(), d = x.cols();
  MatrixXd centers(K, d);

  // k-means++ seeding
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  centers.row(0) = x.row(first);
  for (int c = 1; c < K; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      dist[i] = std::min(dist[i], squared_distance(x, i, centers, c - 1));
      total += dist[i];
    }
    Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (dist[i] <= 0.0) continue;
        acc += dist[i];
        pick = i;
        if (acc > target) break;
      }
    }
    if (pick < 0) throw Error("kmeans: degenerate embedding");
    centers.row(c) = x.row(pick);
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  [[maybe_unused]] double previous = std::numeric_limits<double>::infinity();
  constexpr int kMaxIterations = 1000;
  for (int it = 0; it < kMaxIterations; ++it) {
    double inertia = 0.0;
    std::vector<double> own(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(x, i, centers, 0);
      for (int c = 1; c < K; ++c) {
        const double dc = squared_distance(x, i, centers, c);
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      labels[i] = best;
      own[i] = best_d;
      inertia += best_d;
    }
    assert(inertia <= previous * (1.0 + 1e-12) + 1e-12);
    previous = inertia;

    std::vector<int> counts(static_cast<std::size_t>(K), 0);
    for (int c : labels) ++counts[c];
    for (int c = 0; c < K; ++c) {
      if (counts[c] > 0) continue;
      // Empty cluster: hand it the point farthest from its center.
      Index far = -1;
      for (Index i = 0; i < n; ++i)
        if (counts[labels[i]] > 1 && (far < 0 || own[i] > own[far])) far = i;
      --counts[labels[far]];
      labels[far] = c;
      own[far] = 0.0;
      counts[c] = 1;
    }

    MatrixXd updated = MatrixXd::Zero(K, d);
    for (Index i = 0; i < n; ++i) updated.row(labels[i]) += x.row(i);
    for (int c = 0; c < K; ++c) updated.row(c) /= static_cast<double>(counts[c]);
    double movement = 0.0;
    for (int c = 0; c < K; ++c) movement = std::max(movement, (updated.row(c) - centers.row(c)).norm());
    centers = std::move(updated);
    if (movement < 1e-9) break;
  }

  double inertia = 0.0;
  for (Index i = 0; i < n; ++i) inertia += squared_distance(x, i, centers, labels[i]);
  return {std::move(labels), std::move(centers), inertia};
}

Index distinct_rows(const MatrixXd& x) {
  std::vector<Index> idx(static_cast<std::size_t>(x.rows()));
  std::iota(idx.begin(), idx.end(), Index{0});
  auto less = [&](Index a, Index b) {
    for (Index c = 0; c < x.cols(); ++c)
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    return false;
  };
  std::sort(idx.begin(), idx.end(), less);
  Index count = idx.empty() ? 0 : 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (less(idx[i - 1], idx[i])) ++count;
  return count;
}

}  // namespace

SymmetricEigenpairs jacobi_eigensystem(const MatrixXd& s, double tolerance, int max_sweeps) {
  if (s.rows() != s.cols()) throw DimensionError("jacobi_eigensystem: matrix not square");
  const Index n = s.rows();
  MatrixXd a = s;
  MatrixXd v = MatrixXd::Identity(n, n);
  const double norm = a.norm();
  auto off_diagonal = [&] {
    double sum = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  int sweep = 0;
  while (off_diagonal() > tolerance * norm) {
    if (++sweep > max_sweeps) throw NumericalError("jacobi_eigensystem: no convergence");
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  return sorted_descending(a.diagonal(), v);
}

SymmetricEigenpairs top_eigvecs_sym(const MatrixXd& s, int K, EigenMethod method) {
  if (s.rows() != s.cols()) throw DimensionError("top_eigvecs_sym: matrix not square");
  if (K < 1 || K > s.rows()) throw DimensionError("top_eigvecs_sym: K must be in 1..n");
  if (method == EigenMethod::kAuto)
    method = s.rows() <= 160 ? EigenMethod::kJacobi : EigenMethod::kTridiagonalQR;

  SymmetricEigenpairs all;
  if (method == EigenMethod::kJacobi) {
    all = jacobi_eigensystem(s);
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) throw NumericalError("top_eigvecs_sym: eigensolver failed");
    all = sorted_descending(solver.eigenvalues(), solver.eigenvectors());
  }
  return {all.values.head(K), all.vectors.leftCols(K)};
}

KMeansResult kmeans(const MatrixXd& x, int K, int restarts, std::uint64_t seed) {
  if (K < 1 || K > x.rows()) throw DimensionError("kmeans: need n >= K >= 1");
  if (restarts < 1) throw Error("kmeans: restarts must be positive");
  require_finite(x, "kmeans input");
  if (distinct_rows(x) < K) throw Error("kmeans: degenerate embedding (fewer distinct rows than K)");

  int best_restart = -1;
  LloydRun best{};
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ static_cast<std::uint64_t>(r));
    LloydRun run = lloyd(x, K, rng);
    if (best_restart < 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best_restart = r;
    }
  }
  return {Assignment(std::move(best.labels), K), std::move(best.centers), best.inertia, best_restart};
}

}  // namespace pabm
