#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pabm/metrics.hpp"
#include "support.hpp"

#include <cmath>

using namespace pabm;
using pabm::testing::brute_force_error;
using pabm::testing::random_assignment;
using pabm::testing::relabel;

namespace {

Assignment one_based(std::vector<int> labels) {
  int K = 0;
  for (int c : labels) K = std::max(K, c);
  return Assignment::from_one_based(labels, K);
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

TEST_CASE("clustering_error") {
  const Assignment truth = one_based({1, 1, 2, 2});
  CHECK(clustering_error(truth, truth) == 0.0);
  CHECK(clustering_error(relabel(truth, {1, 0}), truth) == 0.0);
  CHECK(clustering_error(one_based({1, 2, 2, 2}), truth) == 0.25);
  CHECK_THROWS_AS(clustering_error(Assignment::trivial(4), truth), Error);
  CHECK_THROWS_AS(clustering_error(one_based({1, 2, 1}), truth), DimensionError);

  SUBCASE("matches brute force, exhaustive and Hungarian") {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
      const int K = 1 + static_cast<int>(rng.below(5));
      const int n = K + static_cast<int>(rng.below(30));
      const Assignment z = random_assignment(rng, n, K), t = random_assignment(rng, n, K);
      const double oracle = brute_force_error(z, t);
      CHECK(clustering_error(z, t) == oracle);
      CHECK(clustering_error(z, t, MatchMethod::kHungarian) == oracle);
      CHECK(clustering_error(z, t, MatchMethod::kExhaustive) == oracle);
      CHECK(clustering_error(t, z) == oracle);
      CHECK(oracle >= 0.0);
      CHECK(oracle <= 1.0);

      std::vector<int> perm = rng.permutation(K);
      CHECK(clustering_error(relabel(z, perm), t) == oracle);
      CHECK(clustering_error(relabel(z, perm), z) == 0.0);
    }
  }
}

TEST_CASE("matching solvers agree on larger tables") {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const int K = 2 + static_cast<int>(rng.below(7));
    std::vector<std::vector<long>> w(static_cast<std::size_t>(K), std::vector<long>(static_cast<std::size_t>(K)));
    for (auto& row : w)
      for (long& x : row) x = static_cast<long>(rng.below(50));
    CHECK(max_matching_hungarian(w) == max_matching_exhaustive(w));
  }
  // K = 12 exercises the Hungarian path of kAuto.
  const Assignment z = random_assignment(rng, 200, 12);
  std::vector<int> perm = rng.permutation(12);
  CHECK(clustering_error(relabel(z, perm), z) == 0.0);
  std::vector<int> labels = relabel(z, perm).labels();
  labels[0] = (labels[0] + 1) % 12;
  labels[1] = (labels[1] + 1) % 12;
  CHECK(clustering_error(Assignment(labels, 12), z) <= 2.0 / 200.0);
}

TEST_CASE("confusion_matrix") {
  const auto c = confusion_matrix(one_based({1, 1, 2, 2, 2}), one_based({2, 1, 1, 1, 2}));
  CHECK(c == std::vector<std::vector<long>>{{1, 1}, {2, 1}});
}

TEST_CASE("estimation_error") {
  const MatrixXd p = MatrixXd::Constant(4, 4, 0.3);
  CHECK(estimation_error(p, p) == 0.0);
  CHECK(estimation_error(MatrixXd::Ones(5, 5), MatrixXd::Zero(5, 5)) == 1.0);
  Rng rng(63);
  const MatrixXd x = pabm::testing::random_matrix(rng, 7, 7), y = pabm::testing::random_matrix(rng, 7, 7);
  double naive = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) naive += (x(i, j) - y(i, j)) * (x(i, j) - y(i, j));
  CHECK(estimation_error(x, y) == doctest::Approx(naive / 49.0).epsilon(1e-14));
  CHECK_THROWS_AS(estimation_error(MatrixXd::Zero(3, 3), MatrixXd::Zero(4, 4)), DimensionError);
}

TEST_CASE("adjusted_rand_index") {
  const Assignment a = one_based({1, 1, 2, 2, 3, 3});
  CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
  CHECK(adjusted_rand_index(a, Assignment::trivial(6)) == doctest::Approx(0.0));
  CHECK(adjusted_rand_index(Assignment::trivial(6), Assignment::trivial(6)) == 1.0);

  SUBCASE("hand contingency table") {
    // Rows a = {1,1,2,2,3,3}; columns b = {1,1,1,2,2,2}: [[2,0],[1,1],[0,2]].
    const Assignment b = one_based({1, 1, 1, 2, 2, 2});
    const double index = choose2(2) + choose2(1) + choose2(1) + choose2(2);
    const double rows = 3 * choose2(2), cols = 2 * choose2(3), total = choose2(6);
    const double expected = rows * cols / total;
    const double ari = (index - expected) / ((rows + cols) / 2.0 - expected);
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(ari).epsilon(1e-14));
    CHECK(ari == doctest::Approx(0.24242424));
  }
  SUBCASE("label permutation invariance") {
    Rng rng(64);
    for (int trial = 0; trial < 50; ++trial) {
      const int K = 2 + static_cast<int>(rng.below(4));
      const Assignment x = random_assignment(rng, 40, K), y = random_assignment(rng, 40, 3);
      const double v = adjusted_rand_index(x, y);
      CHECK(adjusted_rand_index(relabel(x, rng.permutation(K)), relabel(y, rng.permutation(3))) == doctest::Approx(v).epsilon(1e-14));
      CHECK(adjusted_rand_index(y, x) == doctest::Approx(v).epsilon(1e-14));
      CHECK(v <= 1.0 + 1e-14);
    }
  }
}

TEST_CASE("density") {
  CHECK(density(MatrixXd::Zero(4, 4)) == 0.0);
  CHECK(density(MatrixXd::Ones(4, 4)) == 1.0);
  MatrixXd a = MatrixXd::Zero(10, 10);
  for (int t = 0; t < 17; ++t) a(t / 10, t % 10) = 1.0;
  CHECK((a.array() != 0.0).count() == 17);
  CHECK(density(a) == doctest::Approx(0.17));
}
