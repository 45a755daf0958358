#include "doctest.h"

#include <cmath>
#include <random>

#include "kinder/errors.hpp"
#include "kinder/nursery.hpp"

using namespace kinder;

namespace {
const FieldPtr& F2() {
  static const FieldPtr f = Field::make(2, 1);
  return f;
}
}  // namespace

TEST_CASE("matrix nursery sizes") {
  const auto n11 = ModuleNursery::matrix(1, 1, F2());
  CHECK(n11->log_order() == 3);
  const auto n21 = ModuleNursery::matrix(2, 1, F2());
  CHECK(n21->log_order() == 8);
  CHECK(n21->S().size() == 3);
  CHECK_NOTHROW(n21->verify());
  CHECK_NOTHROW(ModuleNursery::matrix(1, 1, Field::make(2, 2))->verify());
  CHECK_NOTHROW(ModuleNursery::matrix(2, 2, Field::make(3, 1))->verify());
}

TEST_CASE("full kind of matrix(1,1,F_2) is the unitriangular group") {
  const auto n = ModuleNursery::matrix(1, 1, F2());
  const Kind q(n, Subspace::full(F2(), n->r()));
  auto [G, labels] = q.to_group();
  CHECK(G.order() == 8);
  CHECK(G.verify_axioms());
  const auto sc = sigma_counts(G);
  CHECK(sc.sigma == 10);
  CHECK(sc.sigma_iota == 5);
  // group law against 3x3 unitriangular matrices [[1,x,w],[0,1,u],[0,0,1]]
  for (std::size_t i = 0; i < G.order(); ++i) {
    for (std::size_t j = 0; j < G.order(); ++j) {
      const Triple& a = labels[i];
      const Triple& b = labels[j];
      const Triple& c = labels[G.mul(static_cast<SmallGroup::Index>(i), static_cast<SmallGroup::Index>(j))];
      CHECK(c.x[0] == (a.x[0] ^ b.x[0]));
      CHECK(c.u[0] == (a.u[0] ^ b.u[0]));
      CHECK(c.w[0] == (a.w[0] ^ b.w[0] ^ (a.x[0] & b.u[0])));
    }
  }
}

TEST_CASE("span(S) kind in matrix(2,1,F_2)") {
  const auto n = ModuleNursery::matrix(2, 1, F2());
  const Subspace V = n->span_S();
  const Kind q(n, V);
  CHECK(q.log_order() == V.dim() + 4);
  auto [G, labels] = q.to_group();
  CHECK(G.order() == (std::size_t{1} << q.log_order()));
  for (const auto& t : labels) CHECK(q.contains(t));
  CHECK(derived_equals_gamma3(Kind(n, Subspace::full(F2(), n->r()))));
}

TEST_CASE("a kind whose commutator is smaller than Gamma_3") {
  const auto n = ModuleNursery::matrix(2, 1, F2());
  // V = span{E11}: x u only reaches the first row of M
  std::vector<Elem> e11(n->r(), 0);
  e11[0] = 1;
  const Subspace V(Matrix(F2(), 1, n->r(), e11));
  CHECK_THROWS_AS(kind_from_subspace(n, V), InvalidArgument);
  CHECK_FALSE(derived_equals_gamma3(kind_from_subspace(n, V, true)));
}

TEST_CASE("b2_odd over F_3") {
  const auto n = ModuleNursery::b2_odd(3, 1);
  CHECK(n->log_order() == 3);
  CHECK_NOTHROW(n->verify());
  CHECK(n->bracket({1}, {1}) == Vec{2});
  CHECK(n->bracket({2}, {1}) == Vec{1});
}

TEST_CASE("other families verify") {
  CHECK_NOTHROW(ModuleNursery::unitary(2, 1)->verify());
  CHECK_NOTHROW(ModuleNursery::unitary(3, 1)->verify());
  CHECK_NOTHROW(ModuleNursery::ree_small(1)->verify());
  CHECK_THROWS_AS(ModuleNursery::b2_odd(2, 1), InvalidArgument);
}

TEST_CASE("reconstruction round trips") {
  std::mt19937_64 rng(31);
  for (const auto& n : {ModuleNursery::matrix(2, 1, F2()), ModuleNursery::matrix(1, 1, Field::make(2, 2))}) {
    for (int t = 0; t < 20; ++t) {
      const auto rt = reconstruct_round_trip(n, Subspace::full(F2(), n->r()), rng);
      CHECK_MESSAGE(rt.exact, rt.failure);
    }
  }
}

TEST_CASE("an annihilated T element is detected") {
  const auto n = ModuleNursery::matrix(2, 1, F2());
  const Kind q(n, Subspace::full(F2(), n->r()));
  auto [G, labels] = q.to_group();
  const CoordinateOracle oracle{[&](SmallGroup::Index i) { return labels[i].x; },
                                [&](SmallGroup::Index i) { return labels[i].u; },
                                [&](SmallGroup::Index i) { return labels[i].w; }};
  auto find = [&](auto pred) {
    for (SmallGroup::Index i = 0; i < G.order(); ++i)
      if (pred(labels[i])) return i;
    FAIL("no element found");
    return SmallGroup::Index{0};
  };
  std::vector<SmallGroup::Index> rho;
  for (const auto& s : n->S()) rho.push_back(find([&](const Triple& t) { return t.x == s; }));
  std::vector<Vec> T = n->T();
  T.back().assign(n->m(), 0);
  std::vector<SmallGroup::Index> mu;
  for (const auto& t : T)
    mu.push_back(find([&](const Triple& x) { return x.x == Vec(n->r(), 0) && x.u == t; }));
  CHECK_THROWS_AS(reconstruct(G, *n, n->S(), T, rho, mu, oracle), PropertyViolation);
}

TEST_CASE("bound formulas") {
  BoundParams p;
  p.r = 4;
  p.l = 2;
  p.s = 1;
  p.m = 2;
  p.t = 1;
  const auto nc = bound_log(BoundFormula::NurseryCount, p);
  CHECK(nc.raw == doctest::Approx(-2));
  CHECK(nc.clamped == 0);

  BoundParams c;
  c.a = 2;
  c.e = 1;
  c.l = 2;
  const auto cu = bound_log(BoundFormula::CoroUdLower, c);
  CHECK(cu.raw == doctest::Approx(-12));
  CHECK(cu.clamped == 0);

  BoundParams o;
  o.a = o.b = 2;
  o.c = 1;
  o.e = 1;
  o.p = 2;
  CHECK(bound_log(BoundFormula::OrbitUpper, o).raw == doctest::Approx(std::log2(36.0)));
  CHECK_THROWS_AS(bound_formula_from_string("nope"), InvalidArgument);
}

TEST_CASE("unitriangular exponents") {
  const auto u = unitriangular_exponents(3, 1);
  CHECK(u.exact == 3);
  CHECK(u.binomial_form == 1);
  CHECK(u.quadratic_form == doctest::Approx(2.25));
}

TEST_CASE("relaxed census of matrix(1,1,F_2) matches the group oracle") {
  const auto n = ModuleNursery::matrix(1, 1, F2());
  const auto c0 = census(n, 0, {}, true);
  CHECK(c0.kinder == 1);
  CHECK(c0.classes == 1);
  CHECK(c0.group_order == 4);
  const auto c1 = census(n, 1, {}, true);
  CHECK(c1.kinder == 1);
  CHECK(c1.classes == 1);
  CHECK(c1.group_order == 8);
  CHECK(c1.bound_holds);
}

TEST_CASE("census of matrix(2,1,F_2) respects the clamped bound") {
  const auto n = ModuleNursery::matrix(2, 1, F2());
  for (std::size_t l = n->span_S().dim(); l <= n->r(); ++l) {
    const auto c = census(n, l);
    CHECK(c.kinder >= 1);
    CHECK(c.bound_holds);
  }
}

TEST_CASE("subspaces containing W") {
  const Subspace W(Matrix(F2(), 1, 4, {1, 0, 0, 0}));
  // planes of F_2^4 through a fixed line: lines of F_2^3
  CHECK(subspaces_containing(W, 2).size() == 7);
  for (const auto& V : subspaces_containing(W, 3)) CHECK(V.contains(W));
}
