#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "kinder/arith.hpp"
#include "kinder/errors.hpp"
#include "kinder/linalg.hpp"

using namespace kinder;

namespace {

// All l-dim subspaces of F_q^n (q prime) by brute force: span every l-tuple
// of vectors and keep the distinct spans of full rank.
std::set<std::vector<std::vector<Elem>>> brute_subspaces(const FieldPtr& F, std::size_t n, std::size_t l) {
  const std::uint32_t q = F->order();
  std::size_t vecs = 1;
  for (std::size_t i = 0; i < n; ++i) vecs *= q;
  auto vec = [&](std::size_t code) {
    std::vector<Elem> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<Elem>(code % q);
      code /= q;
    }
    return v;
  };
  std::set<std::vector<std::vector<Elem>>> out;
  std::vector<std::size_t> idx(l, 0);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < l; ++i) combos *= vecs;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t cc = c;
    Matrix g(F, l, n);
    for (std::size_t i = 0; i < l; ++i) {
      const auto v = vec(cc % vecs);
      cc /= vecs;
      for (std::size_t j = 0; j < n; ++j) g.at(i, j) = v[j];
    }
    if (rank(g) != l) continue;
    // the set of all vectors in the span identifies it
    std::set<std::vector<Elem>> span;
    std::size_t coeffs = 1;
    for (std::size_t i = 0; i < l; ++i) coeffs *= q;
    for (std::size_t k = 0; k < coeffs; ++k) {
      std::vector<Elem> v(n, 0);
      std::size_t kk = k;
      for (std::size_t i = 0; i < l; ++i) {
        const Elem a = static_cast<Elem>(kk % q);
        kk /= q;
        for (std::size_t j = 0; j < n; ++j) v[j] = F->add(v[j], F->mul(a, g.at(i, j)));
      }
      span.insert(v);
    }
    out.insert({span.begin(), span.end()});
  }
  return out;
}

}  // namespace

TEST_CASE("rank and nullspace on small examples") {
  auto F2 = Field::make(2, 1);
  CHECK(rank(Matrix::identity(F2, 3)) == 3);
  CHECK(nullspace_basis(Matrix::identity(F2, 3)).rows() == 0);
  Matrix m(F2, 1, 2, {1, 1});
  CHECK(rank(m) == 1);
  const Matrix ns = nullspace_basis(m);
  REQUIRE(ns.rows() == 1);
  CHECK(ns.at(0, 0) == 1);
  CHECK(ns.at(0, 1) == 1);
}

TEST_CASE("rank plus nullity and m v = 0 on random matrices") {
  std::mt19937_64 rng(5);
  for (auto q : {3u, 4u, 5u}) {
    auto F = Field::of_order(q);
    for (int t = 0; t < 20; ++t) {
      const Matrix m = random_matrix(F, 4, 6, rng);
      const Matrix ns = nullspace_basis(m);
      CHECK(rank(m) + ns.rows() == 6);
      for (std::size_t i = 0; i < ns.rows(); ++i) {
        Matrix v(F, 6, 1);
        for (std::size_t j = 0; j < 6; ++j) v.at(j, 0) = ns.at(i, j);
        CHECK((m * v).is_zero());
      }
    }
  }
}

TEST_CASE("gaussian binomial values") {
  CHECK(gaussian_binomial(4, 2, 2) == 35);
  CHECK(gaussian_binomial(7, 0, 3) == 1);
  CHECK(gaussian_binomial(3, 3, 2) == 1);
  CHECK(gaussian_binomial(3, 1, 2) == 7);
  for (std::uint64_t n = 1; n <= 6; ++n)
    for (std::uint64_t l = 0; l <= n; ++l) CHECK(gaussian_binomial(n, l, 3) >= ipow(BigInt(3), l * (n - l)));
}

TEST_CASE("subspace enumeration equals brute force") {
  for (auto q : {2u, 3u}) {
    auto F = Field::of_order(q);
    for (std::size_t n = 1; n <= (q == 2 ? 4u : 3u); ++n) {
      for (std::size_t l = 0; l <= n; ++l) {
        const auto subs = enumerate_subspaces(F, n, l);
        CHECK(BigInt(subs.size()) == gaussian_binomial(n, l, q));
        if (l == 0) continue;
        CHECK(subs.size() == brute_subspaces(F, n, l).size());
        std::set<std::vector<Elem>> distinct;
        for (const auto& s : subs) distinct.insert(s.basis().entries());
        CHECK(distinct.size() == subs.size());
      }
    }
  }
  CHECK(enumerate_subspaces(Field::make(2, 1), 2, 1).size() == 3);
  CHECK(enumerate_subspaces(Field::make(2, 1), 3, 3).front() == Subspace::full(Field::make(2, 1), 3));
}

TEST_CASE("enumeration cap is enforced") {
  CHECK_THROWS_AS(enumerate_subspaces(Field::make(2, 1), 6, 3, 10), CapExceeded);
}

TEST_CASE("random subspaces are uniform over the 35 planes of F_2^4") {
  auto F = Field::make(2, 1);
  const auto all = enumerate_subspaces(F, 4, 2);
  std::map<std::vector<Elem>, int> counts;
  std::mt19937_64 rng(17);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[random_subspace(F, 4, 2, rng).basis().entries()];
  CHECK(counts.size() == 35);
  const double expect = static_cast<double>(draws) / 35.0;
  double chi2 = 0;
  for (const auto& s : all) {
    const double d = counts[s.basis().entries()] - expect;
    chi2 += d * d / expect;
  }
  // 34 degrees of freedom; mean 34, sd ~8.2
  CHECK(chi2 < 34 + 5 * 8.25);
  CHECK(random_subspace(F, 3, 0, rng).dim() == 0);
  CHECK(random_subspace(F, 3, 3, rng) == Subspace::full(F, 3));
}

TEST_CASE("subspace membership and sums") {
  auto F = Field::make(3, 1);
  Subspace a(Matrix(F, 1, 3, {1, 2, 0}));
  Subspace b(Matrix(F, 1, 3, {0, 0, 1}));
  const Subspace s = a.sum(b);
  CHECK(s.dim() == 2);
  const std::vector<Elem> v{2, 1, 2};
  CHECK(s.contains(std::span<const Elem>(v)));
  const std::vector<Elem> w{1, 1, 0};
  CHECK_FALSE(s.contains(std::span<const Elem>(w)));
  CHECK(s.contains(a));
}

TEST_CASE("flatten to the prime field round-trips") {
  auto F4 = Field::make(2, 2);
  std::mt19937_64 rng(9);
  const Matrix m = random_matrix(F4, 3, 3, rng);
  CHECK(prime_field_of(*F4)->order() == 2);
  const auto flat = flatten_to_prime(m);
  CHECK(flat.size() == 3 * 3 * 2);
  CHECK(unflatten_from_prime(F4, 3, 3, flat) == m);
}
