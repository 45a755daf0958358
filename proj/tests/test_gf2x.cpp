#include "doctest.h"

#include <random>

#include "kinder/gf.hpp"
#include "kinder/gf2x.hpp"
#include "kinder/errors.hpp"

using namespace kinder;
using Elem = Field::Elem;

TEST_CASE("carry-less multiply against shift-and-xor") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t a = rng(), b = rng();
    std::uint64_t lo = 0, hi = 0;
    for (int i = 0; i < 64; ++i) {
      if ((b >> i) & 1u) {
        lo ^= a << i;
        if (i) hi ^= a >> (64 - i);
      }
    }
    std::uint64_t glo = 0, ghi = 0;
    clmul64(a, b, glo, ghi);
    CHECK(glo == lo);
    CHECK(ghi == hi);
  }
}

TEST_CASE("binary irreducibility agrees with the table-driven test") {
  for (std::uint32_t d = 1; d <= 10; ++d) {
    for (std::uint32_t tail = 0; tail < (1u << d); ++tail) {
      Poly f(d + 1, 0);
      for (std::uint32_t i = 0; i < d; ++i) f[i] = (tail >> i) & 1u;
      f[d] = 1;
      CHECK(is_irreducible_gf2(BitPoly::from_coeffs(f)) == poly::is_irreducible(f, 2));
    }
  }
}

TEST_CASE("default binary moduli are the smallest irreducibles") {
  CHECK(BinaryField::make(3)->modulus_coeffs() == Poly{1, 1, 0, 1});
  CHECK(BinaryField::make(5)->modulus_coeffs() == Poly{1, 0, 1, 0, 0, 1});
  for (std::uint32_t d : {2u, 4u, 7u, 9u}) CHECK(smallest_irreducible_gf2(d) == BitPoly::from_coeffs(poly::smallest_irreducible(2, d)));
}

TEST_CASE("binary field arithmetic matches the table field") {
  for (std::uint32_t d : {3u, 5u, 8u}) {
    auto B = BinaryField::make(d);
    auto F = Field::make(2, d, B->modulus_coeffs());
    for (Elem a = 0; a < F->order(); a += 5) {
      for (Elem b = 0; b < F->order(); b += 7) {
        const auto ba = B->from_vector(F->to_vector(a));
        const auto bb = B->from_vector(F->to_vector(b));
        CHECK(B->to_vector(B->mul(ba, bb)) == F->to_vector(F->mul(a, b)));
        CHECK(B->to_vector(B->add(ba, bb)) == F->to_vector(F->add(a, b)));
      }
      const auto ba = B->from_vector(F->to_vector(a));
      CHECK(B->to_vector(B->pow2k(ba, 2)) == F->to_vector(F->pow(a, 4)));
      if (a != 0) CHECK(B->mul(ba, B->inv(ba)) == B->one());
    }
  }
}

TEST_CASE("large binary field: Frobenius has order n and hex round-trips") {
  auto B = BinaryField::make(101);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto a = B->random(rng);
    CHECK(B->pow2k(a, 101) == a);
    CHECK(B->from_hex(B->to_hex(a)) == a);
    const auto b = B->random(rng);
    CHECK(B->square(B->add(a, b)) == B->add(B->square(a), B->square(b)));
  }
}

TEST_CASE("reducible binary modulus is rejected") {
  CHECK_THROWS_AS(BinaryField::make(2, Poly{1, 0, 1}), InvalidArgument);
}
