#include "pabm/core.hpp"

#include <algorithm>
#include <map>

namespace pabm {

Assignment::Assignment(std::vector<int> labels, int communities)
    : labels_(std::move(labels)), communities_(communities) {
  if (communities_ < 1) throw Error("Assignment: need at least one community");
  if (labels_.empty()) throw Error("Assignment: no nodes");
  std::vector<int> counts(static_cast<std::size_t>(communities_), 0);
  for (int c : labels_) {
    if (c < 0 || c >= communities_)
      throw Error("Assignment: label " + std::to_string(c + 1) + " outside 1.." +
                  std::to_string(communities_));
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int k = 0; k < communities_; ++k)
    if (counts[static_cast<std::size_t>(k)] == 0)
      throw Error("Assignment: community " + std::to_string(k + 1) + " is empty");
}

Assignment Assignment::from_one_based(std::span<const int> labels, int communities) {
  std::vector<int> zero(labels.begin(), labels.end());
  for (int& c : zero) --c;
  return Assignment(std::move(zero), communities);
}

Assignment Assignment::compact(std::span<const int> labels) {
  std::map<int, int> ids;
  for (int c : labels) ids.emplace(c, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int c : labels) out.push_back(ids.at(c));
  return Assignment(std::move(out), next);
}

Assignment Assignment::trivial(int n) {
  return Assignment(std::vector<int>(static_cast<std::size_t>(n), 0), 1);
}

Assignment Assignment::canonical() const {
  std::vector<int> relabel(static_cast<std::size_t>(communities_), -1);
  int next = 0;
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int& r = relabel[static_cast<std::size_t>(labels_[i])];
    if (r < 0) r = next++;
    out[i] = r;
  }
  return Assignment(std::move(out), communities_);
}

std::vector<int> Assignment::one_based() const {
  std::vector<int> out = labels_;
  for (int& c : out) ++c;
  return out;
}

std::vector<int> Assignment::sizes() const {
  std::vector<int> counts(static_cast<std::size_t>(communities_), 0);
  for (int c : labels_) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

std::vector<int> Assignment::members(int community) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (labels_[static_cast<std::size_t>(i)] == community) out.push_back(i);
  return out;
}

MatrixXd Assignment::membership() const {
  MatrixXd z = MatrixXd::Zero(size(), communities_);
  for (int i = 0; i < size(); ++i) z(i, labels_[static_cast<std::size_t>(i)]) = 1.0;
  return z;
}

BlockPartition::BlockPartition(const Assignment& a) {
  const int K = a.communities();
  offsets.assign(static_cast<std::size_t>(K) + 1, 0);
  for (int c : a.labels()) ++offsets[static_cast<std::size_t>(c) + 1];
  for (int k = 0; k < K; ++k) offsets[k + 1] += offsets[k];
  ordering.resize(static_cast<std::size_t>(a.size()));
  std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
  for (int i = 0; i < a.size(); ++i) ordering[static_cast<std::size_t>(cursor[a[i]]++)] = i;
}

std::vector<Index> BlockPartition::inverse() const {
  std::vector<Index> inv(ordering.size());
  for (std::size_t p = 0; p < ordering.size(); ++p) inv[static_cast<std::size_t>(ordering[p])] = static_cast<Index>(p);
  return inv;
}

void PabmParams::validate() const {
  if (lambda.rows() != assignment.size() || lambda.cols() != assignment.communities())
    throw DimensionError("PabmParams: Lambda must be n x K");
  require_finite(lambda, "Lambda");
  if ((lambda.array() < 0.0).any() || (lambda.array() > 1.0).any())
    throw Error("PabmParams: Lambda entries must lie in [0,1]");
}

MatrixXd assemble_probability(const PabmParams& params) {
  params.validate();
  const auto& a = params.assignment;
  const int n = a.size();
  MatrixXd p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = params.lambda(i, a[j]) * params.lambda(j, a[i]);
  if ((p.array() > 1.0).any()) throw Error("assemble_probability: entry exceeds 1 (invalid Lambda scaling)");
  return p;
}

}  // namespace pabm
