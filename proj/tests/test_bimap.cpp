#include "doctest.h"

#include <random>

#include "kinder/bimap.hpp"
#include "kinder/errors.hpp"

using namespace kinder;

namespace {

// Count pairs (A, B) over a prime field by enumerating all of them.
std::size_t brute_hom_count(const MatrixSystem& phi, const MatrixSystem& ups, int sign) {
  const FieldPtr& F = phi.field;
  const std::size_t a = ups.rows, s = phi.rows, b = phi.cols, t = ups.cols;
  const std::size_t unknowns = a * s + b * t;
  std::size_t total = 1;
  for (std::size_t i = 0; i < unknowns; ++i) total *= F->order();
  std::size_t count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    Matrix A(F, a, s), B(F, b, t);
    for (std::size_t i = 0; i < a * s; ++i, c /= F->order()) A.at(i / s, i % s) = static_cast<Elem>(c % F->order());
    for (std::size_t i = 0; i < b * t; ++i, c /= F->order()) B.at(i / t, i % t) = static_cast<Elem>(c % F->order());
    bool ok = true;
    for (std::size_t v = 0; v < phi.size() && ok; ++v) {
      Matrix rhs = ups.mats[v] * B.transpose();
      if (sign < 0) rhs = -rhs;
      ok = A * phi.mats[v] == rhs;
    }
    count += ok ? 1 : 0;
  }
  return count;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("End of the identity system") {
  auto F2 = Field::make(2, 1);
  MatrixSystem phi(F2, 2, 2, {Matrix::identity(F2, 2)});
  CHECK(end_dimension(phi) == 4);
}

TEST_CASE("empty system is unconstrained") {
  auto F2 = Field::make(2, 1);
  MatrixSystem phi(F2, 1, 1);
  CHECK(end_dimension(phi) == 2);
}

TEST_CASE("hom dimensions match brute force over F_2 and F_3") {
  std::mt19937_64 rng(21);
  for (auto q : {2u, 3u}) {
    auto F = Field::of_order(q);
    for (int t = 0; t < 6; ++t) {
      const auto phi = random_system(F, 2, 2, 2, rng);
      const auto ups = random_system(F, 2, 2, 2, rng);
      for (int sign : {1, -1}) {
        CHECK(ipow(q, hom_dimension(phi, ups, sign)) == brute_hom_count(phi, ups, sign));
      }
    }
  }
}

TEST_CASE("hom basis satisfies its equations and F_p dimension scales by e") {
  std::mt19937_64 rng(4);
  auto F4 = Field::make(2, 2);
  const auto phi = random_system(F4, 1, 2, 3, rng);
  const auto ups = random_system(F4, 1, 2, 3, rng);
  const HomSpace h = hom_space(phi, ups, 1);
  CHECK(h.dim_Fp() == 2 * h.dim_K());
  for (const auto& [A, B] : h.basis) CHECK(satisfies_hom(phi, ups, 1, A, B));
}

TEST_CASE("End contains the scalar pairs") {
  std::mt19937_64 rng(8);
  auto F = Field::make(5, 1);
  const auto phi = random_system(F, 3, 3, 3, rng);
  for (Elem l = 1; l < 5; ++l) {
    const Matrix I = Matrix::identity(F, 3).scaled(l);
    CHECK(satisfies_hom(phi, phi, 1, I, I));
  }
}

TEST_CASE("shape mismatch is rejected") {
  auto F = Field::make(2, 1);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(hom_space(random_system(F, 2, 2, 2, rng), random_system(F, 3, 2, 2, rng), 1), InvalidArgument);
}

TEST_CASE("lambda blocks are antisymmetric") {
  auto F2 = Field::make(2, 1);
  MatrixSystem phi(F2, 2, 2, {Matrix::identity(F2, 2)});
  const Matrix L = lambda_build(phi).mats[0];
  Matrix want(F2, 4, 4);
  want.set_block(0, 2, Matrix::identity(F2, 2));
  want.set_block(2, 0, Matrix::identity(F2, 2));
  CHECK(L == want);
  std::mt19937_64 rng(2);
  auto F3 = Field::make(3, 1);
  for (const auto& M : lambda_build(random_system(F3, 3, 2, 3, rng)).mats) CHECK(M.transpose() == -M);
}

TEST_CASE("witness systems have scalar End") {
  auto F2 = Field::make(2, 1);
  const auto w = witness_system(1, 2, F2);
  REQUIRE(w.size() == 3);
  CHECK(w.mats[0] == Matrix(F2, 1, 2, {1, 0}));
  CHECK(w.mats[1] == Matrix(F2, 1, 2, {0, 1}));
  CHECK(w.mats[2] == Matrix(F2, 1, 2, {0, 1}));
  CHECK(end_dimension(w) == 1);
  CHECK(witness_system(2, 2, F2).size() == 3);
  for (std::size_t m = 1; m <= 3; ++m)
    for (std::size_t n = m; n <= 3; ++n)
      for (auto q : {2u, 3u, 4u}) CHECK(end_dimension(witness_system(m, n, Field::of_order(q))) == 1);
  CHECK_THROWS(witness_system(3, 2, F2));
}

TEST_CASE("right nucleus of matrix multiplication is M_c(K)") {
  auto F2 = Field::make(2, 1);
  const Bimap b1 = matrix_multiplication_bimap(F2, 2, 2, 1);
  CHECK(right_nucleus_dimension(b1, Subspace::full(F2, b1.left_dim())) == 1);
  const Bimap b2 = matrix_multiplication_bimap(F2, 2, 2, 2);
  CHECK(right_nucleus_dimension(b2, Subspace::full(F2, b2.left_dim())) == 4);
  const std::size_t mid = b2.mid_dim(), tgt = b2.target_dim();
  CHECK(right_nucleus_dimension(b2, Subspace::zero(F2, b2.left_dim())) == mid * mid + tgt * tgt);
}
