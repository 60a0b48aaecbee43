#include "pabm/clustering.hpp"

#include "pabm/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pabm {
namespace {

constexpr double kRidge = 1e-12;
constexpr double kDegreeRidge = 1e-12;

int resolve_sparsity(const SSCConfig& cfg, int K, Index n) {
  const int L = cfg.max_nonzeros > 0 ? cfg.max_nonzeros : K;
  if (L < 1 || L >= n) throw Error("SSCConfig: need 1 <= L < n (L = " + std::to_string(L) + ")");
  return L;
}

// Least squares on the selected columns via ridged normal equations, plus one
// refinement step against the true residual.
VectorXd refit(const MatrixXd& a, const std::vector<Index>& support, const VectorXd& target) {
  const auto s = static_cast<Index>(support.size());
  MatrixXd as(a.rows(), s);
  for (Index t = 0; t < s; ++t) as.col(t) = a.col(support[static_cast<std::size_t>(t)]);
  MatrixXd gram = as.transpose() * as;
  gram.diagonal().array() += kRidge;
  const Eigen::LDLT<MatrixXd> ldlt(gram);
  VectorXd w = ldlt.solve(as.transpose() * target);
  w += ldlt.solve(as.transpose() * (target - as * w));
  return w;
}

VectorXd apply_support(const MatrixXd& a, const std::vector<Index>& support, const VectorXd& w) {
  VectorXd out = VectorXd::Zero(a.rows());
  for (std::size_t t = 0; t < support.size(); ++t) out += w(static_cast<Index>(t)) * a.col(support[t]);
  return out;
}

SimilarityMatrix build_similarity(const MatrixXd& a, int L, double tol) {
  const Index n = a.rows();
  SimilarityMatrix out{MatrixXd::Zero(n, n), MatrixXd()};
  for (Index j = 0; j < n; ++j) {
    const OmpColumn col = omp_column(a, j, L, tol);
    for (std::size_t t = 0; t < col.support.size(); ++t) out.weights(col.support[t], j) = col.coefficients[t];
  }
  out.similarity = out.weights.cwiseAbs() + out.weights.transpose().cwiseAbs();
  return out;
}

// sin of the largest principal angle between span(inner) and its projection on span(outer).
double containment_gap(const MatrixXd& outer, const MatrixXd& inner) {
  if (inner.cols() == 0) return 0.0;
  if (outer.cols() == 0) return 1.0;
  const MatrixXd resid = inner - outer * (outer.transpose() * inner);
  return Eigen::JacobiSVD<MatrixXd>(resid).singularValues()(0);
}

}  // namespace

OmpColumn omp_column(const MatrixXd& a, Index j, int L, double tol) {
  const Index n = a.rows();
  if (n < 2 || a.cols() != n) throw DimensionError("omp_column: A must be n x n with n >= 2");
  if (j < 0 || j >= n) throw DimensionError("omp_column: column out of range");
  if (L < 1 || L > n - 1) throw Error("omp_column: need 1 <= L <= n-1");

  OmpColumn out;
  const VectorXd target = a.col(j);
  VectorXd residual = target;
  double rnorm = residual.norm();
  out.residual_norms.push_back(rnorm);
  if (rnorm == 0.0) {
    out.isolated = true;
    return out;
  }

  // Correlation is the inner product over the atom norm; zero columns are never selected.
  const VectorXd norms = a.colwise().norm().transpose();
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);
  excluded[static_cast<std::size_t>(j)] = true;
  for (Index i = 0; i < n; ++i)
    if (norms(i) == 0.0) excluded[static_cast<std::size_t>(i)] = true;
  VectorXd w;
  while (static_cast<int>(out.support.size()) < L && rnorm > tol) {
    const VectorXd corr = a.transpose() * residual;
    Index best = -1;
    double best_abs = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (excluded[static_cast<std::size_t>(i)]) continue;
      const double c = std::abs(corr(i)) / norms(i);
      if (c > best_abs) {
        best_abs = c;
        best = i;
      }
    }
    if (best < 0) break;  // residual orthogonal to every remaining column
    excluded[static_cast<std::size_t>(best)] = true;
    out.support.push_back(best);
    w = refit(a, out.support, target);
    residual = target - apply_support(a, out.support, w);
    rnorm = residual.norm();
    out.residual_norms.push_back(rnorm);
  }
  out.coefficients.assign(w.data(), w.data() + w.size());
  return out;
}

SimilarityMatrix self_representation(const MatrixXd& a, const SSCConfig& cfg, int K) {
  if (a.rows() != a.cols()) throw DimensionError("self_representation: matrix not square");
  require_finite(a, "self_representation input");
  return build_similarity(a, resolve_sparsity(cfg, K, a.rows()), cfg.residual_tol);
}

Assignment spectral_cluster(const MatrixXd& s, int K, int restarts, std::uint64_t seed) {
  require_symmetric(s, "affinity");
  const Index n = s.rows();
  if (K < 1 || K > n) throw DimensionError("spectral_cluster: need 1 <= K <= n");
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j && s(i, j) < 0.0) throw Error("spectral_cluster: affinity has negative entries");
  if (K == 1) return Assignment::trivial(static_cast<int>(n));

  const VectorXd degree = s.rowwise().sum();
  const VectorXd scale = (degree.array() + kDegreeRidge).rsqrt();
  const MatrixXd m = scale.asDiagonal() * s * scale.asDiagonal();
  const MatrixXd embedding = top_eigvecs_sym(m, K).vectors;

  std::vector<Index> connected;
  for (Index i = 0; i < n; ++i)
    if (degree(i) != 0.0) connected.push_back(i);
  if (static_cast<int>(connected.size()) < K) throw Error("spectral_cluster: degenerate embedding");

  MatrixXd rows(static_cast<Index>(connected.size()), K);
  for (std::size_t r = 0; r < connected.size(); ++r) {
    rows.row(static_cast<Index>(r)) = embedding.row(connected[r]);
    const double norm = rows.row(static_cast<Index>(r)).norm();
    if (norm > 0.0) rows.row(static_cast<Index>(r)) /= norm;
  }
  const KMeansResult km = kmeans(rows, K, restarts, seed);

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t r = 0; r < connected.size(); ++r) labels[static_cast<std::size_t>(connected[r])] = km.labels[static_cast<int>(r)];
  const std::vector<int> sizes = km.labels.sizes();
  const int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (int& c : labels)
    if (c < 0) c = largest;
  return Assignment(std::move(labels), K).canonical();
}

Assignment ssc_cluster(const MatrixXd& a, int K, const SSCConfig& cfg) {
  if (a.rows() != a.cols()) throw DimensionError("ssc_cluster: matrix not square");
  if (K < 1 || K > a.rows()) throw DimensionError("ssc_cluster: need 1 <= K <= n");
  if (K == 1) return Assignment::trivial(static_cast<int>(a.rows()));
  const SimilarityMatrix sim = self_representation(a, cfg, K);
  return spectral_cluster(sim.similarity, K, cfg.kmeans_restarts, cfg.seed);
}

std::vector<int> connected_components(const MatrixXd& s, double threshold, int& count) {
  const Index n = s.rows();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  count = 0;
  std::vector<Index> stack;
  for (Index start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    comp[static_cast<std::size_t>(start)] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index w = 0; w < n; ++w) {
        if (comp[static_cast<std::size_t>(w)] >= 0 || !(s(w, v) > threshold)) continue;
        comp[static_cast<std::size_t>(w)] = count;
        stack.push_back(w);
      }
    }
    ++count;
  }
  return comp;
}

NoiselessResult noiseless_ssc(const MatrixXd& p, int K, const SSCConfig& cfg) {
  if (p.rows() != p.cols()) throw DimensionError("noiseless_ssc: matrix not square");
  require_finite(p, "noiseless_ssc input");
  const Index n = p.rows();
  if (K < 1 || K > n) throw DimensionError("noiseless_ssc: need 1 <= K <= n");

  // Representation stops on the residual tolerance rather than on L.
  const SimilarityMatrix sim = build_similarity(p, static_cast<int>(n - 1), cfg.residual_tol);
  const double peak = sim.similarity.maxCoeff();
  int count = 0;
  const std::vector<int> comp = connected_components(sim.similarity, cfg.edge_tol * peak, count);

  struct Component {
    std::vector<Index> nodes;
    MatrixXd basis;
  };
  std::vector<Component> components(static_cast<std::size_t>(count));
  for (Index i = 0; i < n; ++i) components[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].nodes.push_back(i);
  for (auto& c : components) {
    MatrixXd cols(n, static_cast<Index>(c.nodes.size()));
    for (std::size_t t = 0; t < c.nodes.size(); ++t) cols.col(static_cast<Index>(t)) = p.col(c.nodes[t]);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(cols);
    qr.setThreshold(cfg.rank_tol);
    const Index rank = qr.rank();
    c.basis = MatrixXd(qr.householderQ()) .leftCols(rank);
  }

  // Larger subspaces first, so lower-dimensional pieces merge into the
  // subspace that contains them.
  std::vector<std::size_t> order(components.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return components[x].basis.cols() > components[y].basis.cols();
  });
  std::vector<MatrixXd> groups;
  std::vector<int> group_of(components.size(), -1);
  for (std::size_t idx : order) {
    const MatrixXd& basis = components[idx].basis;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (containment_gap(groups[g], basis) <= cfg.angle_tol) {
        group_of[idx] = static_cast<int>(g);
        break;
      }
    }
    if (group_of[idx] < 0) {
      group_of[idx] = static_cast<int>(groups.size());
      groups.push_back(basis);
    }
  }
  if (static_cast<int>(groups.size()) != K)
    throw Error("noiseless_ssc: subspace count mismatch (found " + std::to_string(groups.size()) +
                ", expected " + std::to_string(K) + ")");

  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    labels[static_cast<std::size_t>(i)] = group_of[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])];
  Assignment raw(std::move(labels), K);
  Assignment canon = raw.canonical();
  // Reorder bases to match the canonical labels.
  std::vector<MatrixXd> bases(static_cast<std::size_t>(K));
  for (Index i = 0; i < n; ++i) bases[static_cast<std::size_t>(canon[static_cast<int>(i)])] = groups[static_cast<std::size_t>(raw[static_cast<int>(i)])];
  return {std::move(canon), std::move(bases)};
}

}  // namespace pabm
