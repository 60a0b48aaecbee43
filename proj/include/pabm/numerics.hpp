#pragma once

#include "pabm/core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace pabm {

template <typename Scalar>
struct RankOneFactors {
  Scalar sigma{0};
  Vector<Scalar> u;
  Vector<Scalar> v;
  int iterations = 0;

  Matrix<Scalar> matrix() const { return sigma * u * v.transpose(); }
};

struct PowerIterationOptions {
  double tolerance = 1e-12;  // relative change of the Rayleigh quotient
  int max_iterations = 5000;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> power_start(Index n) {
  return Vector<Scalar>::Constant(n, Scalar(1) / std::sqrt(Scalar(n)));
}

}  // namespace detail

/// Leading singular triple of `b` by power iteration on the smaller Gram
/// matrix. sigma * u * v^T is the best rank-one approximation, and the
/// residual satisfies ||b - sigma u v^T||_F^2 = ||b||_F^2 - sigma^2.
/// (u, v) are flipped jointly so that sum(u) >= 0.
template <typename Derived>
RankOneFactors<typename Derived::Scalar> rank_one_approx(const Eigen::MatrixBase<Derived>& b,
                                                         const PowerIterationOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  const Index m = b.rows(), p = b.cols();
  if (m < 1 || p < 1) throw DimensionError("rank_one_approx: empty matrix");

  RankOneFactors<Scalar> out;
  const bool right = p <= m;  // iterate on b^T b (p x p) when p is the smaller side
  const Matrix<Scalar> gram = right ? Matrix<Scalar>(b.transpose() * b) : Matrix<Scalar>(b * b.transpose());
  const Index d = gram.rows();

  Vector<Scalar> x = detail::power_start<Scalar>(d);
  Vector<Scalar> y = gram * x;
  Scalar q = x.dot(y);
  const Scalar scale = gram.diagonal().sum();
  if (scale == Scalar(0)) {
    out.u = Vector<Scalar>::Constant(m, Scalar(1) / std::sqrt(Scalar(m)));
    out.v = Vector<Scalar>::Constant(p, Scalar(1) / std::sqrt(Scalar(p)));
    return out;
  }

  if (y.norm() == Scalar(0)) {
    // All-ones start in the null space of a nonzero Gram matrix: use the
    // coordinate with the largest diagonal instead.
    Index top = 0;
    gram.diagonal().maxCoeff(&top);
    x = Vector<Scalar>::Unit(d, top);
    y = gram * x;
    q = x.dot(y);
  }

  bool converged = false;
  int it = 0;
  while (it < opt.max_iterations) {
    ++it;
    const Scalar ny = y.norm();
    x = y / ny;
    y = gram * x;
    const Scalar q_new = x.dot(y);
    const Scalar change = std::abs(q_new - q);
    q = q_new;
    if (change <= Scalar(opt.tolerance) * std::max(std::abs(q), scale * Scalar(1e-300))) {
      converged = true;
      break;
    }
  }
  // The vector lags the quotient by a square root; polish it until it stops
  // moving, within the same iteration budget.
  if (converged) {
    Scalar previous = std::numeric_limits<Scalar>::infinity();
    const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
    while (it < opt.max_iterations) {
      const Scalar ny = y.norm();
      if (ny == Scalar(0)) break;
      const Vector<Scalar> next = y / ny;
      const Scalar delta = (next - x).norm();
      if (delta >= previous) break;
      ++it;
      x = next;
      y = gram * x;
      previous = delta;
      if (delta <= floor) break;
    }
  }
  out.iterations = it;
  if (!converged) {
    const Scalar resid = (y - q * x).norm();
    throw NumericalError("rank_one_approx: no convergence after " + std::to_string(it) +
                         " iterations (eigen-residual " + std::to_string(double(resid)) + ")");
  }

  if (right) {
    out.v = x;
    Vector<Scalar> bu = b * x;
    out.sigma = bu.norm();
    out.u = out.sigma > Scalar(0) ? Vector<Scalar>(bu / out.sigma)
                                  : Vector<Scalar>::Constant(m, Scalar(1) / std::sqrt(Scalar(m)));
  } else {
    out.u = x;
    Vector<Scalar> bv = b.transpose() * x;
    out.sigma = bv.norm();
    out.v = out.sigma > Scalar(0) ? Vector<Scalar>(bv / out.sigma)
                                  : Vector<Scalar>::Constant(p, Scalar(1) / std::sqrt(Scalar(p)));
  }
  if (out.u.sum() < Scalar(0)) {
    out.u = -out.u;
    out.v = -out.v;
  }
  return out;
}

struct SymmetricEigenpairs {
  VectorXd values;   // descending
  MatrixXd vectors;  // columns match `values`
};

enum class EigenMethod { kAuto, kJacobi, kTridiagonalQR };

// Full eigendecomposition by cyclic Jacobi rotations, sorted descending.
SymmetricEigenpairs jacobi_eigensystem(const MatrixXd& s, double tolerance = 1e-12,
                                       int max_sweeps = 100);

// Orthonormal eigenvectors of the K algebraically largest eigenvalues.
// kAuto uses Jacobi up to n = 160 and Householder tridiagonalization + QR above.
SymmetricEigenpairs top_eigvecs_sym(const MatrixXd& s, int K, EigenMethod method = EigenMethod::kAuto);

struct KMeansResult {
  Assignment labels;
  MatrixXd centers;  // K x d
  double inertia = 0.0;
  int restart = 0;   // index of the winning restart
};

// Lloyd's algorithm from k-means++ seeds, best of `restarts` by inertia.
// Restart r draws from Rng(seed ^ r). Throws if X has fewer than K distinct rows.
KMeansResult kmeans(const MatrixXd& x, int K, int restarts, std::uint64_t seed);

}  // namespace pabm
