#include <random>

#include "doctest.h"
#include "rlie/exactalg.hpp"

using namespace rlie;

namespace {

// Textbook binomial with exact integers, reduced at the end.
std::uint64_t naive_binomial(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return static_cast<std::uint64_t>(r);
}

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint32_t p, std::mt19937& rng, double density = 1.0) {
  DenseMatrix M(r, c);
  std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (u(rng) < density) M(i, j) = d(rng);
  return M;
}

}  // namespace

TEST_CASE("field arithmetic and characteristic checks") {
  CHECK(is_prime(2));
  CHECK(is_prime(7919));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK_THROWS_AS(PrimeField(4), InputError);
  CHECK_THROWS_AS(PrimeField(1), InputError);
  CHECK_THROWS_AS(PrimeField(40009), InputError);

  for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u}) {
    PrimeField F(p);
    for (Coeff a = 1; a < p; ++a) {
      CHECK(F.mul(a, F.inv(a)) == 1);
      CHECK(F.pow(a, p - 1) == 1);
    }
    CHECK_THROWS_AS(F.inv(0), Error);
    CHECK(F.from_int(-1) == p - 1);
  }
  FpScalar a(3, 5), b(4, 5);
  CHECK((a * b).value() == 2);
  CHECK((a / b * b) == a);
  CHECK_THROWS_AS(a + FpScalar(1, 7), DimensionError);
}

TEST_CASE("Lucas binomials agree with exact integer binomials") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint64_t a = 0; a < 40; ++a)
      for (std::uint64_t b = 0; b <= a + 2; ++b) {
        CHECK(lucas_binomial(a, b, p).value() == naive_binomial(a, b) % p);
        CHECK(binomial_mod(a, b, p) == naive_binomial(a, b) % p);
      }
  CHECK_THROWS_AS(lucas_binomial(3, 1, 6), InputError);
}

TEST_CASE("sparse rank agrees with dense rank") {
  std::mt19937 rng(17);
  for (std::uint32_t p : {2u, 5u, 31u}) {
    PrimeField F(p);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t r = 1 + rng() % 40, c = 1 + rng() % 40;
      DenseMatrix M = random_matrix(r, c, p, rng, trial % 3 == 0 ? 0.08 : 0.4);
      const std::size_t dr = rank(F, M);
      CHECK(rank(F, SparseMatrix::from_dense(F, M)) == dr);
      EliminationOptions always_dense;
      always_dense.density_threshold = 0.0;
      CHECK(rank(F, SparseMatrix::from_dense(F, M), always_dense) == dr);
      // rank-nullity
      CHECK(nullspace(F, M).dim() + dr == c);
      CHECK(nullspace(F, SparseMatrix::from_dense(F, M)) == nullspace(F, M));
      const SubspaceBasis K = nullspace(F, M);
      for (const auto& v : K.vectors()) CHECK(is_zero(M.apply(F, v)));
    }
  }
}

TEST_CASE("low-rank products have the expected rank") {
  std::mt19937 rng(5);
  PrimeField F(7);
  DenseMatrix A = random_matrix(60, 9, 7, rng), B = random_matrix(9, 50, 7, rng);
  DenseMatrix M = A.multiply(F, B);
  CHECK(rank(F, M) <= 9);
  CHECK(rank(F, SparseMatrix::from_dense(F, M)) == rank(F, M));
}

TEST_CASE("subspace sum and intersection satisfy the dimension formula") {
  std::mt19937 rng(23);
  for (std::uint32_t p : {2u, 3u, 11u}) {
    PrimeField F(p);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = 2 + rng() % 12;
      auto rand_space = [&] {
        std::vector<Vec> vs;
        const std::size_t k = rng() % (n + 1);
        DenseMatrix M = random_matrix(k, n, p, rng, 0.5);
        for (std::size_t i = 0; i < k; ++i) vs.emplace_back(M.row(i).begin(), M.row(i).end());
        return SubspaceBasis::span(F, n, vs);
      };
      const SubspaceBasis A = rand_space(), B = rand_space();
      const SubspaceOps ops = subspace_ops(F, A, B);
      CHECK(ops.sum.dim() + ops.intersection.dim() == A.dim() + B.dim());
      CHECK(ops.sum.contains(F, A));
      CHECK(ops.sum.contains(F, B));
      CHECK(A.contains(F, ops.intersection));
      CHECK(B.contains(F, ops.intersection));
    }
  }
  PrimeField F(3);
  CHECK_THROWS_AS(subspace_sum(F, SubspaceBasis(3), SubspaceBasis(4)), DimensionError);
}

TEST_CASE("canonical echelon form does not depend on the spanning set") {
  PrimeField F(5);
  std::vector<Vec> a{{1, 2, 0, 3}, {0, 1, 4, 1}};
  std::vector<Vec> b{{1, 3, 4, 4}, {2, 4, 0, 1}};  // row sums and doubles of a
  const auto A = SubspaceBasis::span(F, 4, a), B = SubspaceBasis::span(F, 4, b);
  CHECK(A == B);
  CHECK(A.pivots() == std::vector<std::size_t>{0, 1});
  const Vec v = F.add(a[0], a[1]);
  const Vec c = A.coordinates(F, v);
  Vec back(4, 0);
  for (std::size_t i = 0; i < c.size(); ++i) F.axpy(back, c[i], A.vectors()[i]);
  CHECK(back == v);
}

TEST_CASE("solve returns a solution when one exists") {
  std::mt19937 rng(3);
  PrimeField F(13);
  for (int t = 0; t < 20; ++t) {
    DenseMatrix M = random_matrix(6, 8, 13, rng);
    Vec x0(8);
    for (auto& v : x0) v = rng() % 13;
    const Vec b = M.apply(F, x0);
    Vec x;
    REQUIRE(solve(F, M, b, x));
    CHECK(M.apply(F, x) == b);
  }
  DenseMatrix Z(2, 2);
  Vec x;
  CHECK_FALSE(solve(F, Z, Vec{1, 0}, x));
}

TEST_CASE("batched elimination agrees with incremental elimination") {
  std::mt19937 rng(41);
  for (std::uint32_t p : {2u, 5u, 7919u}) {
    PrimeField F(p);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t r = 1 + rng() % 90, c = 1 + rng() % 60;
      DenseMatrix M = random_matrix(r, c, p, rng, trial % 2 ? 0.1 : 0.6);
      Echelon E(F, c);
      BatchedEchelon B(F, c, 1 + rng() % 16);
      for (std::size_t i = 0; i < r; ++i) {
        const Vec row(M.row(i).begin(), M.row(i).end());
        E.insert(row);
        if (i % 2)
          B.add(F.to_sparse(row));
        else
          B.add(std::span<const Coeff>(row));
      }
      CHECK(B.rank() == E.rank());
      CHECK(B.basis() == E.basis());
      CHECK(B.kernel() == E.kernel());
      CHECK(B.rank() == rank(F, M));
    }
  }
}
