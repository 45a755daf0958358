#include "doctest.h"

#include <set>

#include "kinder/errors.hpp"
#include "kinder/gf.hpp"
#include "kinder/gf2x.hpp"

using namespace kinder;
using Elem = Field::Elem;

namespace {

Elem x_of(const Field& F) {
  std::vector<std::uint32_t> v(F.degree(), 0);
  v[1] = 1;
  return F.from_vector(v);
}

// Schoolbook product of power-basis coordinates reduced by the modulus.
std::vector<std::uint32_t> naive_mul(const Field& F, std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  const std::uint32_t p = F.characteristic();
  const std::size_t e = F.degree();
  std::vector<std::uint32_t> c(2 * e, 0);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  const auto& f = F.modulus();
  for (std::size_t d = 2 * e - 1; d >= e; --d) {
    const std::uint32_t lead = c[d];
    if (lead == 0) continue;
    for (std::size_t k = 0; k <= e; ++k) c[d - e + k] = (c[d - e + k] + (p - lead) * f[k]) % p;
  }
  c.resize(e);
  return c;
}

}  // namespace

TEST_CASE("prime field F_2 and default modulus") {
  auto F = Field::make(2, 1);
  CHECK(F->order() == 2);
  CHECK(F->add(1, 1) == 0);
  CHECK(F->mul(1, 1) == 1);
}

TEST_CASE("F_4 with x^2+x+1") {
  auto F = Field::make(2, 2, Poly{1, 1, 1});
  const Elem x = x_of(*F);
  const Elem x1 = F->add(x, 1);
  CHECK(F->mul(x, x1) == 1);
  CHECK(F->frobenius(x, 1) == x1);
  CHECK(F->to_vector(x1) == std::vector<std::uint32_t>{1, 1});
  CHECK(F->multiplicative_order(x) == 3);
}

TEST_CASE("F_8 with x^3+x+1") {
  auto F = Field::make(2, 3, Poly{1, 1, 0, 1});
  const Elem x = x_of(*F);
  CHECK(F->pow(x, 7) == 1);
  Elem acc = 1;
  for (int k = 1; k < 7; ++k) {
    acc = F->mul(acc, x);
    CHECK(acc != 1);
  }
  const std::vector<std::uint32_t> v{0, 0, 1};
  CHECK(F->from_vector(v) == F->mul(x, x));
  for (Elem a = 0; a < 8; ++a) {
    const auto c = F->to_vector(a);
    CHECK(F->from_vector(c) == a);
  }
}

TEST_CASE("field axioms and multiplication against schoolbook products") {
  for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 4}, {3, 2}, {5, 2}, {7, 1}, {3, 3}}) {
    auto F = Field::make(p, e);
    CAPTURE(F->describe());
    std::set<Elem> powers;
    for (std::uint32_t k = 0; k + 1 < F->order(); ++k) powers.insert(F->pow(F->primitive(), k));
    CHECK(powers.size() == F->order() - 1);
    for (Elem a = 0; a < F->order(); ++a) {
      if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
      CHECK(F->add(a, F->neg(a)) == 0);
      CHECK(F->frobenius(a, e) == a);
      for (Elem b = 0; b < F->order(); b += 3) {
        const auto want = naive_mul(*F, F->to_vector(a), F->to_vector(b));
        CHECK(F->to_vector(F->mul(a, b)) == want);
      }
    }
  }
}

TEST_CASE("negative exponents invert") {
  auto F = Field::make(5, 2);
  for (Elem a = 1; a < F->order(); ++a) CHECK(F->mul(F->pow(a, -3), F->pow(a, 3)) == 1);
}

TEST_CASE("reducible modulus and bad characteristic are rejected") {
  CHECK_THROWS_AS(Field::make(2, 2, Poly{1, 0, 1}), InvalidArgument);
  CHECK_THROWS_AS(Field::make(4, 1), InvalidArgument);
  CHECK_THROWS_AS(Field::of_order(6), InvalidArgument);
}

TEST_CASE("irreducibility over F_p matches root and factor search") {
  // Degree 2 and 3 polynomials are irreducible iff they have no roots.
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t d : {2u, 3u}) {
      std::uint32_t total = 1;
      for (std::uint32_t i = 0; i < d; ++i) total *= p;
      for (std::uint32_t code = 0; code < total; ++code) {
        Poly f(d + 1, 0);
        std::uint32_t c = code;
        for (std::uint32_t i = 0; i < d; ++i) {
          f[i] = c % p;
          c /= p;
        }
        f[d] = 1;
        bool root = false;
        for (std::uint32_t x = 0; x < p; ++x) {
          std::uint64_t val = 0;
          for (std::size_t i = f.size(); i-- > 0;) val = (val * x + f[i]) % p;
          root = root || val == 0;
        }
        CHECK(poly::is_irreducible(f, p) == !root);
      }
    }
  }
}
