#include "doctest.h"

#include <algorithm>
#include <random>

#include "kinder/errors.hpp"
#include "kinder/linalg.hpp"
#include "kinder/smallgrp.hpp"

using namespace kinder;

TEST_CASE("constructions have the right orders and satisfy the axioms") {
  CHECK(SmallGroup::cyclic(6).order() == 6);
  CHECK(SmallGroup::dihedral(4).order() == 8);
  CHECK(SmallGroup::symmetric(4).order() == 24);
  CHECK(SmallGroup::alternating(5).order() == 60);
  CHECK(SmallGroup::elementary_abelian(3, 2).order() == 9);
  for (const auto& g : {SmallGroup::dihedral(5), SmallGroup::alternating(4),
                        SmallGroup::direct_product(SmallGroup::cyclic(2), SmallGroup::cyclic(3))})
    CHECK(g.verify_axioms());
}

TEST_CASE("closure") {
  const auto s3 = SmallGroup::symmetric(3);
  CHECK(s3.closure({s3.identity()}).size() == 1);
  const auto g = SmallGroup::from_permutations({{1, 2, 0}, {1, 0, 2}});
  CHECK(g.order() == 6);
  // Lagrange in a group of order 256
  const auto e = SmallGroup::elementary_abelian(2, 8);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto c = e.closure({static_cast<SmallGroup::Index>(rng() % 256), static_cast<SmallGroup::Index>(rng() % 256)});
    CHECK(256 % c.size() == 0);
  }
}

TEST_CASE("subgroup counts") {
  CHECK(all_subgroups(SmallGroup::cyclic(6)).size() == 4);
  CHECK(all_subgroups(SmallGroup::dihedral(4)).size() == 10);
  CHECK(all_subgroups(SmallGroup::alternating(5)).size() == 59);
  CHECK_THROWS_AS(all_subgroups(SmallGroup::alternating(5), 20), CapExceeded);
}

TEST_CASE("elementary abelian subgroup count is a sum of gaussian binomials") {
  BigInt total = 0;
  for (std::uint64_t l = 0; l <= 3; ++l) total += gaussian_binomial(3, l, 2);
  CHECK(BigInt(all_subgroups(SmallGroup::elementary_abelian(2, 3)).size()) == total);
  CHECK(sigma_counts(SmallGroup::elementary_abelian(2, 3)).sigma == 16);
}

TEST_CASE("isomorphism classes") {
  const auto cls = iso_classes({SmallGroup::cyclic(4), SmallGroup::elementary_abelian(2, 2)});
  CHECK(cls.class_count() == 2);
  const auto d8 = sigma_counts(SmallGroup::dihedral(4));
  CHECK(d8.sigma == 10);
  CHECK(d8.sigma_iota == 5);
  const auto a5 = sigma_counts(SmallGroup::alternating(5));
  CHECK(a5.sigma == 59);
  CHECK(a5.sigma_iota == 9);
  const auto cp = sigma_counts(SmallGroup::cyclic(7));
  CHECK(cp.sigma == 2);
  CHECK(cp.sigma_iota == 2);
}

TEST_CASE("find_isomorphism on a relabelled copy and on non-isomorphic groups") {
  const auto g = SmallGroup::symmetric(4);
  std::vector<SmallGroup::Index> perm(g.order());
  for (SmallGroup::Index i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937_64 rng(12);
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  const auto h = relabel_group(g, perm);
  const auto iso = find_isomorphism(g, h);
  REQUIRE(iso);
  CHECK(is_isomorphism(g, h, *iso));
  CHECK_FALSE(find_isomorphism(SmallGroup::symmetric(4), SmallGroup::direct_product(SmallGroup::alternating(4), SmallGroup::cyclic(2))));
  // symmetries of a square as permutations of its corners
  CHECK(find_isomorphism(SmallGroup::dihedral(4), SmallGroup::from_permutations({{1, 2, 3, 0}, {3, 2, 1, 0}})).has_value());
}

TEST_CASE("commutator subgroup and center") {
  const auto s4 = SmallGroup::symmetric(4);
  CHECK(s4.derived_subgroup().size() == 12);
  CHECK(s4.center().size() == 1);
  CHECK(SmallGroup::dihedral(4).center().size() == 2);
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS(SmallGroup::from_table({0, 1, 1, 1}, 2));
}
