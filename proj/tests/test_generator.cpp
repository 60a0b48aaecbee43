#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pabm/generator.hpp"
#include "support.hpp"

#include <cmath>
#include <set>

using namespace pabm;

namespace {

double off_diagonal_mean(const MatrixXd& p) {
  const double n = static_cast<double>(p.rows());
  return (p.sum() - p.trace()) / (n * (n - 1.0));
}

}  // namespace

TEST_CASE("balanced sizes") {
  CHECK(balanced_sizes(10, 3) == std::vector<int>{4, 3, 3});
  CHECK(balanced_sizes(11, 3) == std::vector<int>{4, 4, 3});
  CHECK(balanced_sizes(12, 4) == std::vector<int>{3, 3, 3, 3});
}

TEST_CASE("gen_diverse") {
  SUBCASE("structure") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = gen_diverse({101, 3, 0.8, 0.6, seed});
      CHECK(inst.truth.size() == 101);
      for (int s : inst.truth.sizes()) CHECK(std::abs(s - 101.0 / 3.0) <= 1.0);
      CHECK(assemble_probability(inst.params) == inst.P);
      CHECK(inst.A == inst.A.transpose());
      CHECK(inst.A.diagonal().isZero(0.0));
      CHECK(((inst.A.array() == 0.0) || (inst.A.array() == 1.0)).all());
      CHECK(inst.scramble.size() == 101u);
    }
  }
  SUBCASE("omega = 0 is block diagonal") {
    const auto inst = gen_diverse({60, 3, 1.0, 0.0, 4});
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 60; ++j)
        if (inst.truth[i] != inst.truth[j]) CHECK(inst.P(i, j) == 0.0);
  }
  SUBCASE("range bounds") {
    const double a = 0.7, omega = 0.4;
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 1000; ++seed) {
      const auto inst = gen_diverse({40, 4, a, omega, seed});
      for (int i = 0; i < 40; ++i)
        for (int l = 0; l < 4; ++l, ++checked) {
          const double v = inst.params.lambda(i, l);
          CHECK(v > 0.0);
          CHECK(v <= (l == inst.truth[i] ? a : a * omega));
        }
    }
  }
  SUBCASE("average connection probability at K = 3, omega = 0.9") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = gen_diverse({600, 3, 1.0, 0.9, seed});
      CHECK(std::abs(off_diagonal_mean(inst.P) - 0.21833) <= 0.02);
    }
  }
  SUBCASE("determinism") {
    const auto x = gen_diverse({80, 2, 1.0, 0.5, 42}), y = gen_diverse({80, 2, 1.0, 0.5, 42});
    CHECK(x.params.lambda == y.params.lambda);
    CHECK(x.P == y.P);
    CHECK(x.A == y.A);
    CHECK(x.truth == y.truth);
    CHECK(x.scramble == y.scramble);
    const auto z = gen_diverse({80, 2, 1.0, 0.5, 43});
    CHECK(z.A != x.A);
  }
  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(gen_diverse({3, 4, 1.0, 0.5, 1}), Error);
    CHECK_THROWS_AS(gen_diverse({30, 2, 1.5, 0.5, 1}), Error);
    CHECK_THROWS_AS(gen_diverse({30, 2, 1.0, -0.1, 1}), Error);
  }
}

TEST_CASE("gen_homophily") {
  SUBCASE("structure") {
    const auto inst = gen_homophily({40, 2.0, 0.8, 0.2, 3});
    CHECK(inst.truth.sizes() == std::vector<int>{20, 20});
    CHECK(assemble_probability(inst.params) == inst.P);
    for (int k = 0; k < 2; ++k) {
      int high = 0;
      for (int i : inst.truth.members(k))
        if (inst.params.lambda.row(i).sum() > 0.5 * (0.8 + 0.2) * (std::sqrt(2.0 / 3.0) + std::sqrt(1.0 / 3.0))) ++high;
      CHECK(high == 10);
    }
  }
  SUBCASE("h -> infinity separates the communities") {
    const auto inst = gen_homophily({40, 1e6, 0.8, 0.2, 1});
    double within = 0.0, between = 0.0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j)
        (inst.truth[i] == inst.truth[j] ? within : between) =
            std::max(inst.truth[i] == inst.truth[j] ? within : between, inst.P(i, j));
    CHECK(between <= 1e-5 * within);
  }
  SUBCASE("equal factors give an SBM-like P") {
    const auto inst = gen_homophily({20, 3.0, 0.5, 0.5, 2});
    std::set<double> values;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j)
        if (i != j) values.insert(inst.P(i, j));
    // Within and between communities.
    CHECK(values.size() == 2u);
  }
  SUBCASE("h = 1 gives a rank-one P") {
    const auto inst = gen_homophily({24, 1.0, 0.9, 0.3, 5});
    // Both Lambda columns equal factor_i / sqrt(2), so P = f f^T / 2.
    CHECK(inst.params.lambda.col(0) == inst.params.lambda.col(1));
    const VectorXd f = inst.params.lambda.col(0) * std::sqrt(2.0);
    CHECK((inst.P - f * f.transpose() / 2.0).cwiseAbs().maxCoeff() <= 1e-15);
    Eigen::JacobiSVD<MatrixXd> svd(inst.P);
    CHECK(svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0));
  }
  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(gen_homophily({30, 2.0, 0.8, 0.2, 1}), Error);
    CHECK_THROWS_AS(gen_homophily({40, 0.0, 0.8, 0.2, 1}), Error);
  }
}

TEST_CASE("sample_adjacency") {
  CHECK(sample_adjacency(MatrixXd::Zero(6, 6), 1).isZero(0.0));
  MatrixXd ones = MatrixXd::Ones(6, 6);
  ones.diagonal().setZero();
  CHECK(sample_adjacency(ones, 1) == ones);

  MatrixXd bad = MatrixXd::Constant(3, 3, 0.5);
  bad(0, 1) = 0.2;
  CHECK_THROWS_AS(sample_adjacency(bad, 1), Error);
  CHECK_THROWS_AS(sample_adjacency(MatrixXd::Constant(3, 3, 1.5), 1), Error);

  SUBCASE("CLT band") {
    Rng rng(12);
    const MatrixXd p = pabm::testing::random_symmetric(rng, 50);
    MatrixXd sum = MatrixXd::Zero(50, 50);
    for (int s = 0; s < 500; ++s) {
      const MatrixXd a = sample_adjacency(p, derive_seed(99, static_cast<std::uint64_t>(s)));
      CHECK(a == a.transpose());
      CHECK(a.diagonal().isZero(0.0));
      sum += a;
    }
    int inside = 0, total = 0;
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) {
        if (i == j) continue;
        const double q = p(i, j), mean = sum(i, j) / 500.0;
        ++total;
        if (std::abs(mean - q) <= 4.0 * std::sqrt(q * (1.0 - q) / 500.0)) ++inside;
      }
    CHECK(inside >= 0.99 * total);
  }
}

TEST_CASE("sparsity_level") {
  CHECK(sparsity_level(MatrixXd::Zero(3, 3)) == 0.0);
  MatrixXd p = MatrixXd::Zero(3, 3);
  p(1, 2) = 0.7;
  CHECK(sparsity_level(p) == 0.7);
  Rng rng(4);
  const MatrixXd q = pabm::testing::random_matrix(rng, 9, 9);
  double naive = 0.0;
  for (Index j = 0; j < 9; ++j)
    for (Index i = 0; i < 9; ++i) naive = std::max(naive, q(i, j));
  CHECK(sparsity_level(q) == naive);
}
