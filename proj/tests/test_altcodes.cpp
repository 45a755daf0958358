#include "doctest.h"

#include <set>

#include "kinder/altcodes.hpp"
#include "kinder/errors.hpp"

using namespace kinder;

namespace {
const FieldPtr& F2() {
  static const FieldPtr f = Field::make(2, 1);
  return f;
}

Subspace code(std::size_t k, std::vector<std::vector<Elem>> rows) {
  Matrix g(F2(), rows.size(), k);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) g.at(i, j) = rows[i][j];
  return Subspace(g);
}

// Hamming weight of the sign pattern: number of odd permutations.
std::size_t weight_by_parity(const GammaK::Word& w) {
  std::size_t n = 0;
  for (auto x : w) {
    // count inversions of the permutation in one-line form
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
    int inv = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inv += perms[x][i] > perms[x][j];
    n += inv % 2;
  }
  return n;
}
}  // namespace

TEST_CASE("Sym_3 tables") {
  for (std::uint8_t a = 0; a < 6; ++a) {
    CHECK(sym3::mul(a, sym3::inv(a)) == 0);
    for (std::uint8_t b = 0; b < 6; ++b) CHECK(sym3::sign(sym3::mul(a, b)) == (sym3::sign(a) != sym3::sign(b)));
  }
}

TEST_CASE("Gamma_k basics") {
  const GammaK g1(1);
  CHECK(g1.order() == 6);
  std::size_t even = 0;
  for (std::uint64_t i = 0; i < 6; ++i) even += g1.in_gamma2(g1.decode(i));
  CHECK(even == 3);
  CHECK(GammaK(2).order() == 36);
  CHECK_THROWS_AS(GammaK(8, 1000), CapExceeded);
  const GammaK g3(3);
  for (std::uint64_t i = 0; i < g3.order(); i += 7) {
    const auto w = g3.decode(i);
    CHECK(g3.encode(w) == i);
    CHECK(g3.weight(w) == weight_by_parity(w));
  }
}

TEST_CASE("code subgroups") {
  const GammaK g3(3);
  CHECK(subgroup_from_code(g3, Subspace::zero(F2(), 3)).group.order() == 27);
  CHECK(subgroup_from_code(g3, Subspace::full(F2(), 3)).group.order() == 216);
  const auto h = subgroup_from_code(g3, code(3, {{1, 1, 0}}));
  CHECK(h.group.order() == 54);
  CHECK(h.group.verify_axioms());
  // Gamma_3 / Gamma_2 is elementary abelian of order 8: squares land in Gamma_2
  for (std::uint64_t i = 0; i < g3.order(); ++i) {
    const auto w = g3.decode(i);
    CHECK(g3.in_gamma2(g3.mul(w, w)));
  }
}

TEST_CASE("Hamming recovery") {
  const GammaK g3(3);
  const auto H = subgroup_from_code(g3, code(3, {{1, 0, 1}}));
  for (SmallGroup::Index i = 0; i < H.group.order(); ++i) {
    const auto& w = H.labels[i];
    CHECK(hamming_recover(H.group, i) == g3.weight(w));
    if (g3.in_gamma2(w)) CHECK(hamming_recover(H.group, i) == 0);
  }
  // (transposition, id, transposition) has weight 2
  const GammaK::Word t{3, 0, 3};
  for (SmallGroup::Index i = 0; i < H.group.order(); ++i)
    if (H.labels[i] == t) CHECK(hamming_recover(H.group, i) == 2);
}

TEST_CASE("code classes") {
  const auto r0 = code_classes(3, 0);
  CHECK(r0.classes == 1);
  CHECK(r0.bound <= 1.0);
  const auto r21 = code_classes(2, 1);
  CHECK(r21.codes == 3);
  CHECK(r21.classes == 2);
  CHECK(r21.bound == doctest::Approx(1.0));
  // weight classes of lines in F_2^k
  for (std::size_t k = 1; k <= 5; ++k) CHECK(code_classes(k, 1).classes == k);
  const auto r42 = code_classes(4, 2);
  CHECK(r42.codes == 35);
  CHECK(r42.classes >= r42.bound_ceil);
  // orbit sizes sum to the number of codes
  std::vector<std::size_t> sizes(r42.classes, 0);
  for (auto c : r42.class_of) ++sizes[c];
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  CHECK(total == 35);
}

TEST_CASE("canonical code is permutation invariant") {
  const auto a = canonical_code(code(4, {{1, 1, 0, 0}, {0, 0, 1, 0}}));
  const auto b = canonical_code(code(4, {{0, 1, 0, 1}, {1, 0, 0, 0}}));
  CHECK(a == b);
  CHECK_FALSE(a == canonical_code(code(4, {{1, 0, 0, 0}, {0, 1, 0, 0}})));
}
