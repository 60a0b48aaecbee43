#pragma once

#include "pabm/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pabm {

struct EstimateReport {
  MatrixXd p_hat;      // clipped to [0,1]
  MatrixXd p_hat_raw;  // before clipping
  // sum_{k,l} ||A^{(k,l)} - Theta^{(k,l)}||_F^2, computed from the unclipped blocks
  double objective = 0.0;
  MatrixXd block_sigma;  // K x K leading singular values, symmetric
};

// Rank-one estimate of every community-pair block of A, reassembled in the
// original node order.
EstimateReport estimate_blocks(const MatrixXd& a, const Assignment& assignment);

// Ratio estimators of Lambda under 1^T Lambda^{(k,l)} = 1^T Lambda^{(l,k)}.
// Entries are not confined to [0,1], so the result is not validated.
PabmParams recover_lambda(const MatrixXd& a, const Assignment& assignment);

struct PenaltySpec {
  enum class Kind { kTheoretical, kPractical };
  Kind kind = Kind::kPractical;
  double h1 = 1.0;
  double h2 = 1.0;
  double h3 = 1.0;
};

// Theoretical: H1 n K + H2 K^2 ln n + H3 n ln K.
// Practical: density * n * K * sqrt(ln n * (ln K)^3).
double penalty(const PenaltySpec& spec, int n, int K, double density);

using ClusterFn = std::function<Assignment(const MatrixXd& a, int K, std::uint64_t seed)>;

struct KCriterion {
  int K = 0;
  bool ok = false;
  double objective = 0.0;
  double penalty = 0.0;
  double criterion = 0.0;
  std::string error;
  std::optional<Assignment> assignment;
};

struct KSelection {
  int k_hat = 0;
  std::vector<KCriterion> table;
};

// argmin_K { objective(K) + Pen(n, K) } over [k_min, k_max]; ties go to the
// smaller K. K whose clustering throws are recorded and skipped.
KSelection select_K(const MatrixXd& a, int k_min, int k_max, const ClusterFn& cluster,
                    const PenaltySpec& spec, std::uint64_t seed);

// ||P||_F^2 - sum_{k,l} sigma_1(P^{(k,l)}(Z))^2; zero when Z is the truth of a PABM P.
double detectability_margin(const MatrixXd& p, const Assignment& assignment);

}  // namespace pabm
