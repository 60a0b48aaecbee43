#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pabm/core.hpp"
#include "support.hpp"

using namespace pabm;
using pabm::testing::random_assignment;
using pabm::testing::random_matrix;

TEST_CASE("assignment construction and views") {
  const Assignment a = Assignment::from_one_based(std::vector<int>{2, 1, 2, 3}, 3);
  CHECK(a.labels() == std::vector<int>{1, 0, 1, 2});
  CHECK(a.one_based() == std::vector<int>{2, 1, 2, 3});
  CHECK(a.sizes() == std::vector<int>{1, 2, 1});
  CHECK(a.members(1) == std::vector<int>{0, 2});

  const MatrixXd z = a.membership();
  CHECK(z.rows() == 4);
  CHECK(z.cols() == 3);
  CHECK(z.rowwise().sum().isOnes());
  CHECK(z(3, 2) == 1.0);

  CHECK(a.canonical().labels() == std::vector<int>{0, 1, 0, 2});
  CHECK(Assignment::compact(std::vector<int>{7, 3, 7, 9}).labels() == std::vector<int>{1, 0, 1, 2});
  CHECK(Assignment::trivial(3).communities() == 1);
}

TEST_CASE("assignment rejects empty communities and bad labels") {
  CHECK_THROWS_AS(Assignment({0, 0, 2}, 3), Error);
  CHECK_THROWS_AS(Assignment({0, 3}, 2), Error);
  CHECK_THROWS_AS(Assignment({0, -1}, 2), Error);
  CHECK_THROWS_AS(Assignment::from_one_based(std::vector<int>{0, 1}, 1), Error);
}

TEST_CASE("permute_to_blocks") {
  MatrixXd b(3, 3);
  b << 0, .1, .2, .1, 0, .3, .2, .3, 0;

  SUBCASE("single community in natural order is the identity") {
    CHECK(permute_to_blocks(b, Assignment::trivial(3)) == b);
  }
  SUBCASE("hand permutation") {
    const Assignment a = Assignment::from_one_based(std::vector<int>{2, 1, 2}, 2);
    MatrixXd expected(3, 3);
    expected << 0, .1, .3, .1, 0, .2, .3, .2, 0;
    CHECK(permute_to_blocks(b, a) == expected);
  }
  SUBCASE("round trip and isometry") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(12));
      const int K = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const Assignment a = random_assignment(rng, n, K);
      const MatrixXd m = random_matrix(rng, n, n, -1.0, 1.0);
      const BlockPartition part(a);
      const MatrixXd blocked = permute_to_blocks(m, part);
      CHECK(unpermute_from_blocks(blocked, part) == m);
      CHECK(blocked.squaredNorm() == doctest::Approx(m.squaredNorm()).epsilon(1e-14));

      double total = 0.0;
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) total += block_view(blocked, part, k, l).squaredNorm();
      CHECK(total == doctest::Approx(m.squaredNorm()).epsilon(1e-14));
    }
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(permute_to_blocks(b, Assignment::trivial(4)), DimensionError);
  }
}

TEST_CASE("block_view") {
  MatrixXd m(4, 4);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < 4; ++i) m(i, j) = 10.0 * static_cast<double>(i) + static_cast<double>(j);

  SUBCASE("K = 1 gives the whole matrix") {
    const BlockPartition part(Assignment::trivial(4));
    CHECK(block_view(m, part, 0, 0) == m);
  }
  SUBCASE("four 2x2 blocks from index arithmetic") {
    const BlockPartition part(Assignment({0, 0, 1, 1}, 2));
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const MatrixXd blk = block_view(m, part, k, l);
        for (Index i = 0; i < 2; ++i)
          for (Index j = 0; j < 2; ++j) CHECK(blk(i, j) == m(2 * k + i, 2 * l + j));
      }
  }
  SUBCASE("symmetric input gives transposed mirror blocks") {
    Rng rng(3);
    const MatrixXd s = pabm::testing::random_symmetric(rng, 7);
    const Assignment a({2, 0, 1, 0, 2, 1, 1}, 3);
    const BlockPartition part(a);
    const MatrixXd blocked = permute_to_blocks(s, part);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        CHECK(block_view(blocked, part, k, l) == block_view(blocked, part, l, k).transpose());
  }
  SUBCASE("out of range") {
    const BlockPartition part(Assignment({0, 0, 1, 1}, 2));
    CHECK_THROWS_AS(block_view(m, part, 2, 0), DimensionError);
  }
}

TEST_CASE("assemble_probability") {
  SUBCASE("zero lambda") {
    const PabmParams params{MatrixXd::Zero(5, 2), Assignment({0, 1, 0, 1, 1}, 2)};
    CHECK(assemble_probability(params).isZero(0.0));
  }
  SUBCASE("K = 1 gives u u^T") {
    VectorXd u(4);
    u << .1, .5, .9, .3;
    const MatrixXd p = assemble_probability({u, Assignment::trivial(4)});
    CHECK(p == u * u.transpose());
  }
  SUBCASE("entrywise formula") {
    MatrixXd lambda(4, 2);
    lambda << .11, .23, .37, .41, .53, .61, .71, .83;
    const Assignment a({0, 1, 1, 0}, 2);
    const MatrixXd p = assemble_probability({lambda, a});
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(p(i, j) == lambda(i, a[j]) * lambda(j, a[i]));
    CHECK(p == p.transpose());
  }
  SUBCASE("random instances are symmetric and blockwise rank one") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 + static_cast<int>(rng.below(10));
      const int K = 1 + static_cast<int>(rng.below(3));
      const Assignment a = random_assignment(rng, n, K);
      const MatrixXd lambda = random_matrix(rng, n, K);
      const MatrixXd p = assemble_probability({lambda, a});
      CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const BlockPartition part(a);
      const MatrixXd blocked = permute_to_blocks(p, part);
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
          const MatrixXd blk = block_view(blocked, part, k, l);
          Eigen::JacobiSVD<MatrixXd> svd(blk);
          if (svd.singularValues().size() > 1)
            CHECK(svd.singularValues()(1) <= 1e-12 * std::max(1.0, svd.singularValues()(0)));
        }
    }
  }
  SUBCASE("invalid parameters") {
    MatrixXd lambda = MatrixXd::Constant(3, 1, 0.5);
    lambda(1, 0) = 1.5;
    CHECK_THROWS_AS(PabmParams({lambda, Assignment::trivial(3)}).validate(), Error);
    CHECK_THROWS_AS(PabmParams({MatrixXd::Constant(3, 2, 0.5), Assignment::trivial(3)}).validate(), Error);
  }
}

TEST_CASE("popularity") {
  const Assignment a({0, 0, 1, 1, 1, 1, 1}, 2);
  CHECK(popularity(MatrixXd::Zero(7, 7), a, 0, 1) == 0.0);
  CHECK(popularity(MatrixXd::Ones(7, 7), a, 3, 1) == 5.0);

  Rng rng(9);
  const MatrixXd p = random_matrix(rng, 7, 7);
  for (int i = 0; i < 7; ++i) {
    double naive[2] = {0.0, 0.0};
    for (int j = 0; j < 7; ++j) naive[a[j]] += p(i, j);
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
      CHECK(popularity(p, a, i, k) == doctest::Approx(naive[k]).epsilon(1e-14));
      total += popularity(p, a, i, k);
    }
    CHECK(total == doctest::Approx(p.row(i).sum()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(popularity(p, a, 0, 2), DimensionError);
}
