#include "pabm/estimator.hpp"

#include "pabm/metrics.hpp"
#include "pabm/numerics.hpp"
#include "pabm/random.hpp"

#include <cmath>
#include <limits>

namespace pabm {
namespace {

void check_inputs(const MatrixXd& a, const Assignment& assignment, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": matrix not square");
  if (a.rows() != assignment.size())
    throw DimensionError(std::string(who) + ": matrix has " + std::to_string(a.rows()) +
                         " rows but assignment has " + std::to_string(assignment.size()) + " nodes");
  require_finite(a, who);
}

RankOneFactors<double> block_factors(const MatrixXd& block, int k, int l) {
  try {
    return rank_one_approx(block);
  } catch (const NumericalError& e) {
    throw NumericalError("block (" + std::to_string(k + 1) + "," + std::to_string(l + 1) + "): " + e.what());
  }
}

}  // namespace

EstimateReport estimate_blocks(const MatrixXd& a, const Assignment& assignment) {
  check_inputs(a, assignment, "estimate_blocks");
  const BlockPartition part(assignment);
  const MatrixXd blocked = permute_to_blocks(a, part);
  const int K = assignment.communities();
  const Index n = a.rows();

  MatrixXd theta(n, n);
  EstimateReport report;
  report.block_sigma = MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    for (int l = k; l < K; ++l) {
      const auto block = blocked.block(part.start(k), part.start(l), part.size(k), part.size(l));
      const auto f = block_factors(block, k, l);
      const MatrixXd est = f.matrix();
      theta.block(part.start(k), part.start(l), part.size(k), part.size(l)) = est;
      const double resid = (block - est).squaredNorm();
      report.objective += resid;
      if (l != k) {
        theta.block(part.start(l), part.start(k), part.size(l), part.size(k)) = est.transpose();
        report.objective += (blocked.block(part.start(l), part.start(k), part.size(l), part.size(k)) -
                             est.transpose())
                                .squaredNorm();
      }
      report.block_sigma(k, l) = report.block_sigma(l, k) = f.sigma;
    }
  }
  report.p_hat_raw = unpermute_from_blocks(theta, part);
  report.p_hat = report.p_hat_raw.cwiseMax(0.0).cwiseMin(1.0);
  return report;
}

PabmParams recover_lambda(const MatrixXd& a, const Assignment& assignment) {
  check_inputs(a, assignment, "recover_lambda");
  const BlockPartition part(assignment);
  const MatrixXd blocked = permute_to_blocks(a, part);
  const int K = assignment.communities();

  MatrixXd lambda_blocked = MatrixXd::Zero(a.rows(), K);
  for (int k = 0; k < K; ++k) {
    for (int l = k; l < K; ++l) {
      const auto block = blocked.block(part.start(k), part.start(l), part.size(k), part.size(l));
      const double total = block.sum();
      if (total <= 0.0) continue;  // zero block: both vectors stay zero
      const double root = std::sqrt(total);
      lambda_blocked.block(part.start(k), l, part.size(k), 1) = block.rowwise().sum() / root;
      lambda_blocked.block(part.start(l), k, part.size(l), 1) = block.colwise().sum().transpose() / root;
    }
  }
  MatrixXd lambda(a.rows(), K);
  for (std::size_t p = 0; p < part.ordering.size(); ++p) lambda.row(part.ordering[p]) = lambda_blocked.row(static_cast<Index>(p));
  return {std::move(lambda), assignment};
}

double penalty(const PenaltySpec& spec, int n, int K, double density) {
  const double nn = n, kk = K;
  if (spec.kind == PenaltySpec::Kind::kTheoretical)
    return spec.h1 * nn * kk + spec.h2 * kk * kk * std::log(nn) + spec.h3 * nn * std::log(kk);
  const double lk = std::log(kk);
  return density * nn * kk * std::sqrt(std::log(nn) * lk * lk * lk);
}

KSelection select_K(const MatrixXd& a, int k_min, int k_max, const ClusterFn& cluster,
                    const PenaltySpec& spec, std::uint64_t seed) {
  if (a.rows() != a.cols()) throw DimensionError("select_K: matrix not square");
  const int n = static_cast<int>(a.rows());
  if (k_min < 1 || k_max > n || k_min > k_max) throw Error("select_K: K range must lie within [1, n]");
  const double rho = density(a);

  KSelection out;
  double best = std::numeric_limits<double>::infinity();
  for (int K = k_min; K <= k_max; ++K) {
    KCriterion row;
    row.K = K;
    try {
      Assignment z = cluster(a, K, derive_seed(seed, static_cast<std::uint64_t>(K)));
      if (z.size() != n || z.communities() != K) throw Error("clustering returned wrong shape");
      row.objective = estimate_blocks(a, z).objective;
      row.penalty = penalty(spec, n, K, rho);
      row.criterion = row.objective + row.penalty;
      row.ok = true;
      row.assignment = std::move(z);
      if (row.criterion < best) {
        best = row.criterion;
        out.k_hat = K;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.table.push_back(std::move(row));
  }
  if (out.k_hat == 0) throw Error("select_K: clustering failed for every K");
  return out;
}

double detectability_margin(const MatrixXd& p, const Assignment& assignment) {
  check_inputs(p, assignment, "detectability_margin");
  const BlockPartition part(assignment);
  const MatrixXd blocked = permute_to_blocks(p, part);
  const int K = assignment.communities();
  double margin = 0.0;
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) {
      const MatrixXd block = blocked.block(part.start(k), part.start(l), part.size(k), part.size(l));
      const auto f = block_factors(block, k, l);
      margin += (block - f.matrix()).squaredNorm();
    }
  return margin;
}

}  // namespace pabm
