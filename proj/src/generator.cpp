#include "pabm/generator.hpp"

#include "pabm/random.hpp"

#include <cmath>

namespace pabm {
namespace {

enum SeedTask : std::uint64_t { kScramble = 1, kLambda = 2, kAdjacency = 3, kFactors = 4 };

// Labels in block order, scrambled across node ids.
std::vector<int> scrambled_labels(const std::vector<int>& sizes, Rng& rng, std::vector<int>& scramble) {
  std::vector<int> ordered;
  for (std::size_t k = 0; k < sizes.size(); ++k) ordered.insert(ordered.end(), static_cast<std::size_t>(sizes[k]), static_cast<int>(k));
  const int n = static_cast<int>(ordered.size());
  scramble = rng.permutation(n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) labels[static_cast<std::size_t>(scramble[p])] = ordered[p];
  return labels;
}

}  // namespace

void DiverseConfig::validate() const {
  if (K < 1 || n < K) throw Error("DiverseConfig: need 1 <= K <= n");
  if (!(a > 0.0 && a <= 1.0)) throw Error("DiverseConfig: a must lie in (0,1]");
  if (!(omega >= 0.0 && omega <= 1.0)) throw Error("DiverseConfig: omega must lie in [0,1]");
}

void HomophilyConfig::validate() const {
  if (n < 4 || n % 4 != 0) throw Error("HomophilyConfig: n must be a positive multiple of 4");
  if (!(h > 0.0) || !std::isfinite(h)) throw Error("HomophilyConfig: h must be positive");
  if (!(hi >= 0.0 && hi <= 1.0 && lo >= 0.0 && lo <= 1.0))
    throw Error("HomophilyConfig: factors must lie in [0,1]");
}

std::vector<int> balanced_sizes(int n, int K) {
  std::vector<int> sizes(static_cast<std::size_t>(K), n / K);
  for (int k = 0; k < n % K; ++k) ++sizes[static_cast<std::size_t>(k)];
  return sizes;
}

PabmInstance gen_diverse(const DiverseConfig& cfg) {
  cfg.validate();
  Rng scramble_rng(derive_seed(cfg.seed, kScramble));
  std::vector<int> scramble;
  Assignment truth(scrambled_labels(balanced_sizes(cfg.n, cfg.K), scramble_rng, scramble), cfg.K);

  Rng lambda_rng(derive_seed(cfg.seed, kLambda));
  MatrixXd lambda(cfg.n, cfg.K);
  for (int i = 0; i < cfg.n; ++i)
    for (int l = 0; l < cfg.K; ++l) {
      double v = cfg.a * lambda_rng.uniform_open();
      if (l != truth[i]) v *= cfg.omega;
      lambda(i, l) = v;
    }

  PabmParams params{std::move(lambda), truth};
  MatrixXd p = assemble_probability(params);
  MatrixXd a = sample_adjacency(p, derive_seed(cfg.seed, kAdjacency));
  return {std::move(params), std::move(p), std::move(a), std::move(truth), cfg.seed, std::move(scramble)};
}

PabmInstance gen_homophily(const HomophilyConfig& cfg) {
  cfg.validate();
  Rng scramble_rng(derive_seed(cfg.seed, kScramble));
  std::vector<int> scramble;
  Assignment truth(scrambled_labels({cfg.n / 2, cfg.n / 2}, scramble_rng, scramble), 2);

  Rng factor_rng(derive_seed(cfg.seed, kFactors));
  std::vector<double> factor(static_cast<std::size_t>(cfg.n));
  for (int k = 0; k < 2; ++k) {
    std::vector<int> members = truth.members(k);
    factor_rng.shuffle(members);
    for (std::size_t t = 0; t < members.size(); ++t)
      factor[static_cast<std::size_t>(members[t])] = t < members.size() / 2 ? cfg.hi : cfg.lo;
  }

  const double within = std::sqrt(cfg.h / (1.0 + cfg.h));
  const double between = std::sqrt(1.0 / (1.0 + cfg.h));
  MatrixXd lambda(cfg.n, 2);
  for (int i = 0; i < cfg.n; ++i)
    for (int r = 0; r < 2; ++r) lambda(i, r) = factor[static_cast<std::size_t>(i)] * (truth[i] == r ? within : between);

  PabmParams params{std::move(lambda), truth};
  MatrixXd p = assemble_probability(params);
  MatrixXd a = sample_adjacency(p, derive_seed(cfg.seed, kAdjacency));
  return {std::move(params), std::move(p), std::move(a), std::move(truth), cfg.seed, std::move(scramble)};
}

MatrixXd sample_adjacency(const MatrixXd& p, std::uint64_t seed) {
  require_symmetric(p, "P");
  if ((p.array() < 0.0).any() || (p.array() > 1.0).any())
    throw Error("sample_adjacency: P entries must lie in [0,1]");
  const Index n = p.rows();
  Rng rng(seed);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j)
      if (rng.uniform() < p(i, j)) a(i, j) = a(j, i) = 1.0;
  return a;
}

}  // namespace pabm
