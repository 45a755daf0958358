#include "doctest.h"

#include <random>

#include "kinder/errors.hpp"
#include "kinder/twisted.hpp"

using namespace kinder;

TEST_CASE("B2 over F_2") {
  const B2Group U(Field::make(2, 1));
  CHECK(U.order() == 16);
  CHECK_FALSE(U.verify_axioms().has_value());
  const B2Elem a{1, 0, 0, 0}, b{0, 1, 0, 0};
  const B2Elem c = U.commutator(a, b);
  CHECK(c.r == 0);
  CHECK(c.s == 0);
  CHECK(c.z1 == 1);
  CHECK(c.z2 == 1);
  CHECK(U.phi(1, 1) == std::pair<Elem, Elem>{1, 1});
  CHECK(U.phi(1, 0) == std::pair<Elem, Elem>{0, 0});
}

TEST_CASE("B2 axioms and center over F_4, F_8") {
  const B2Group U4(Field::make(2, 2));
  CHECK_FALSE(U4.verify_axioms().has_value());
  const auto Z = U4.center();
  CHECK(Z.size() == 16);
  for (const auto& z : Z) CHECK(U4.in_gamma3(z));
  const B2Group U8(Field::make(2, 3));
  CHECK_FALSE(U8.verify_axioms().has_value());
  CHECK(U8.order() == 4096);
  CHECK_THROWS_AS(B2Group(Field::make(3, 1)), InvalidArgument);
}

TEST_CASE("B2 commutators follow the bimap over F_8") {
  const auto F = Field::make(2, 3);
  const B2Group U(F);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const B2Elem a = U.decode(rng() % U.order());
    const B2Elem b = U.decode(rng() % U.order());
    const B2Elem c = U.commutator(a, b);
    CHECK(U.in_gamma3(c));
    CHECK(std::pair<Elem, Elem>{c.z1, c.z2} == U.bimap(a, b));
    CHECK(U.mul(U.mul(a, b), U.inv(b)) == a);
  }
}

TEST_CASE("b2 labels are independent of the representatives") {
  const auto F = Field::make(2, 3);
  const B2Group U(F);
  const Subspace V = Subspace::full(Field::make(2, 1), 3);
  std::mt19937_64 rng(5);
  const B2Labels first = b2_labels(U, random_b2_input(U, V, rng));
  for (int run = 0; run < 10; ++run) {
    const B2Labels again = b2_labels(U, random_b2_input(U, V, rng));
    CHECK(again.gamma4 == first.gamma4);
    CHECK(again.gamma4_label == first.gamma4_label);
    CHECK(again.quotient_label == first.quotient_label);
    CHECK(again.recovered_subspace == first.recovered_subspace);
  }
}

TEST_CASE("suzuki form") {
  auto B = BinaryField::make(3, Poly{1, 1, 0, 1});
  const auto t = B->x();
  const auto t2 = B->square(t);
  CHECK(suzuki_form(*B, t, t2) == B->one());
  CHECK(suzuki_form(*B, t, t) == B->zero());
  CHECK(suzuki_form(*B, B->zero(), t2) == B->zero());
}

TEST_CASE("suzuki search and verification") {
  CHECK(suzuki_size_bound(1) == 6);
  CHECK(suzuki_size_bound(2) == 9);
  CHECK_THROWS_AS(suzuki_search(0, 1), InvalidArgument);
  for (std::uint32_t e : {1u, 2u, 7u}) {
    const auto res = suzuki_search(e, 42);
    REQUIRE(res.found);
    const auto& cert = *res.certificate;
    CHECK(cert.S.size() <= suzuki_size_bound(e));
    CHECK(cert.pairs.size() == 2 * e + 1);
    CHECK(suzuki_verify(cert));
    CHECK(suzuki_verify_json(cert.to_json()));
    CHECK(SpanCertificate::from_json(cert.to_json()).S == cert.S);
    if (e == 1) CHECK(cert.S.size() <= 5);

    SpanCertificate zeroed = cert;
    zeroed.S[0] = std::string(cert.S[0].size(), '0');
    CHECK_FALSE(suzuki_verify(zeroed));

    SpanCertificate big = cert;
    while (big.S.size() < suzuki_size_bound(e) + 1) big.S.push_back(cert.S[0]);
    CHECK_FALSE(suzuki_verify(big));
  }
}

TEST_CASE("malformed certificates") {
  CHECK_THROWS_AS(suzuki_verify_json("{"), MalformedInput);
  CHECK_THROWS_AS(suzuki_verify_json(R"({"format":"kinder-suzuki-span"})"), MalformedInput);
}

TEST_CASE("commutators of the A_j, B_i representatives over F_8") {
  const auto F = Field::make(2, 3);
  const B2Group U(F);
  const Elem w = F->primitive();
  for (int j = -1; j <= 3; ++j) {
    for (int i = -1; i <= 1; ++i) {
      const B2Elem A{F->pow(w, j), 0, 0, 0}, B{0, F->pow(w, i), 0, 0};
      const auto c = U.commutator(A, B);
      CHECK(c.z1 == F->pow(w, i + j));
      CHECK(c.z2 == F->pow(w, j + 2 * i));
    }
  }
  for (int k = 0; k < 7; ++k) {
    const B2Elem Ak1{F->pow(w, k + 1), 0, 0, 0}, Ak{F->pow(w, k), 0, 0, 0};
    const B2Elem Bm1{0, F->pow(w, -1), 0, 0}, B0{0, 1, 0, 0};
    const auto g = U.mul(U.commutator(Ak1, Bm1), U.commutator(Ak, B0));
    CHECK(U.in_gamma4(g));
    CHECK(g.z2 == F->add(F->pow(w, k - 1), F->pow(w, k)));
  }
}

TEST_CASE("suzuki form is alternating and biadditive at degree 1001") {
  auto B = BinaryField::make(1001);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 3; ++t) {
    const auto x = B->random(rng), y = B->random(rng), z = B->random(rng);
    CHECK(suzuki_form(*B, x, x) == B->zero());
    CHECK(suzuki_form(*B, B->add(x, y), z) == B->add(suzuki_form(*B, x, z), suzuki_form(*B, y, z)));
    CHECK(suzuki_form(*B, x, y) == suzuki_form(*B, y, x));
  }
}
