#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pabm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Throws unless every entry is finite.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what = "matrix") {
  if (!m.allFinite()) throw Error(std::string(what) + " has non-finite entries");
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return false;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

// Exact symmetry check, used at API boundaries taking adjacency/similarity.
template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* what = "matrix") {
  require_finite(m, what);
  if (m.rows() != m.cols()) throw DimensionError(std::string(what) + " is not square");
  if (!is_symmetric(m)) throw Error(std::string(what) + " is not symmetric");
}

/// Community assignment of n nodes into K non-empty communities.
///
/// Labels are stored 0-based; `one_based()` gives the external form used
/// by every file format.
class Assignment {
 public:
  Assignment(std::vector<int> labels, int communities);

  // Same as the constructor but from labels in 1..K.
  static Assignment from_one_based(std::span<const int> labels, int communities);
  // Relabels arbitrary integer labels to 0..K-1 in increasing label order.
  static Assignment compact(std::span<const int> labels);
  // Single community.
  static Assignment trivial(int n);
  // Relabels communities in order of first appearance.
  Assignment canonical() const;

  int size() const { return static_cast<int>(labels_.size()); }
  int communities() const { return communities_; }
  int operator[](int node) const { return labels_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<int> one_based() const;
  std::vector<int> sizes() const;
  std::vector<int> members(int community) const;

  // n x K one-hot membership matrix Z.
  MatrixXd membership() const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<int> labels_;
  int communities_;
};

/// Node ordering that lists community 0 first, then 1, ... (stable within a
/// community), together with the K+1 cumulative offsets.
struct BlockPartition {
  std::vector<Index> ordering;
  std::vector<Index> offsets;

  explicit BlockPartition(const Assignment& a);

  int communities() const { return static_cast<int>(offsets.size()) - 1; }
  Index size(int k) const { return offsets[k + 1] - offsets[k]; }
  Index start(int k) const { return offsets[k]; }
  // inverse[node] = position of node in `ordering`.
  std::vector<Index> inverse() const;
};

// B(Z,K) = P_Z^T B P_Z.
template <typename Derived>
Matrix<typename Derived::Scalar> permute_to_blocks(const Eigen::MatrixBase<Derived>& b,
                                                   const BlockPartition& part) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<Index>(part.ordering.size());
  if (b.rows() != n || b.cols() != n) throw DimensionError("permute_to_blocks: size mismatch");
  Matrix<Scalar> out(n, n);
  for (Index q = 0; q < n; ++q)
    for (Index p = 0; p < n; ++p) out(p, q) = b(part.ordering[p], part.ordering[q]);
  return out;
}

template <typename Derived>
Matrix<typename Derived::Scalar> permute_to_blocks(const Eigen::MatrixBase<Derived>& b,
                                                   const Assignment& a) {
  if (b.rows() != a.size() || b.cols() != a.size())
    throw DimensionError("permute_to_blocks: matrix is " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + " but assignment has " +
                         std::to_string(a.size()) + " nodes");
  return permute_to_blocks(b, BlockPartition(a));
}

// Inverse of permute_to_blocks.
template <typename Derived>
Matrix<typename Derived::Scalar> unpermute_from_blocks(const Eigen::MatrixBase<Derived>& blocked,
                                                       const BlockPartition& part) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<Index>(part.ordering.size());
  if (blocked.rows() != n || blocked.cols() != n)
    throw DimensionError("unpermute_from_blocks: size mismatch");
  Matrix<Scalar> out(n, n);
  for (Index q = 0; q < n; ++q)
    for (Index p = 0; p < n; ++p) out(part.ordering[p], part.ordering[q]) = blocked(p, q);
  return out;
}

// Copy of the (k,l) block of a matrix already in block order.
template <typename Derived>
Matrix<typename Derived::Scalar> block_view(const Eigen::MatrixBase<Derived>& blocked,
                                            const BlockPartition& part, int k, int l) {
  const int K = part.communities();
  if (k < 0 || l < 0 || k >= K || l >= K) throw DimensionError("block_view: community out of range");
  if (part.size(k) == 0 || part.size(l) == 0) throw Error("block_view: empty community");
  return blocked.block(part.start(k), part.start(l), part.size(k), part.size(l));
}

/// PABM parameters: Lambda is n x K with Lambda(i, l) = V_{i,l}; the block
/// Lambda^{(k,l)} is the rows of community k in column l.
struct PabmParams {
  MatrixXd lambda;
  Assignment assignment;

  // Entries finite and in [0,1]; shapes agree.
  void validate() const;
};

// P_{ij} = Lambda(i, c_j) * Lambda(j, c_i). Throws if any entry exceeds 1.
MatrixXd assemble_probability(const PabmParams& params);

// Sum of row i of P over the columns of community k.
template <typename Derived>
typename Derived::Scalar popularity(const Eigen::MatrixBase<Derived>& p, const Assignment& a,
                                    int node, int community) {
  if (p.rows() != a.size() || p.cols() != a.size()) throw DimensionError("popularity: size mismatch");
  if (node < 0 || node >= a.size()) throw DimensionError("popularity: node out of range");
  if (community < 0 || community >= a.communities())
    throw DimensionError("popularity: community out of range");
  typename Derived::Scalar s(0);
  for (int j = 0; j < a.size(); ++j)
    if (a[j] == community) s += p(node, j);
  return s;
}

}  // namespace pabm
