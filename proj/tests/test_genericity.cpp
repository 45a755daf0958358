#include "doctest.h"

#include <cmath>

#include "kinder/errors.hpp"
#include "kinder/genericity.hpp"

using namespace kinder;

namespace {
ExperimentParams span_params(std::uint32_t n, std::uint32_t s, std::uint64_t q) {
  ExperimentParams p;
  p.n = n;
  p.s = s;
  p.q = q;
  return p;
}
}  // namespace

TEST_CASE("span exhaustive values") {
  const auto r = exhaustive_mode(ExperimentKind::Span, span_params(2, 3, 2));
  CHECK(r.exact);
  CHECK(r.trials == 64);
  CHECK(r.successes == 42);
  CHECK(r.frequency == doctest::Approx(0.65625));
  REQUIRE(r.paper_bound);
  CHECK(*r.paper_bound == doctest::Approx(0.625));

  CHECK(exhaustive_mode(ExperimentKind::Span, span_params(2, 2, 2)).frequency == doctest::Approx(0.375));
  const auto one = exhaustive_mode(ExperimentKind::Span, span_params(1, 1, 2));
  CHECK(one.frequency == doctest::Approx(0.5));
  CHECK(*one.paper_bound == doctest::Approx(0.5));
}

TEST_CASE("span bound formula") {
  CHECK(span_bound(2, 3, 2) == doctest::Approx(1 - (0.5 - 0.125)));
  CHECK(span_bound(3, 4, 3) == doctest::Approx(1 - (1.0 / 3 - 1.0 / 81) / 2));
}

TEST_CASE("end_generic 1x1 over F_2 exhaustive") {
  ExperimentParams p;
  p.m = p.n = p.s = 1;
  p.q = 2;
  const auto r = exhaustive_mode(ExperimentKind::EndGeneric, p);
  CHECK(r.trials == 2);
  CHECK(r.frequency == doctest::Approx(0.5));
  CHECK(r.histogram.at(1) == 1);
  CHECK(r.histogram.at(2) == 1);
}

TEST_CASE("estimates are reproducible from the seed and independent of workers") {
  ExperimentParams p;
  p.m = p.n = p.s = 3;
  p.q = 3;
  const auto a = estimate(ExperimentKind::EndGeneric, p, 300, 99, 1);
  const auto b = estimate(ExperimentKind::EndGeneric, p, 300, 99, 2);
  CHECK(a.successes == b.successes);
  CHECK(a.histogram == b.histogram);
  const auto c = estimate(ExperimentKind::EndGeneric, p, 300, 100, 1);
  CHECK(c.trials == 300);
}

TEST_CASE("estimate agrees with exhaustive span frequency") {
  const auto r = estimate(ExperimentKind::Span, span_params(2, 3, 2), 20000, 7, 1);
  CHECK(std::abs(r.frequency - 0.65625) < 4 * r.standard_error() + 1e-9);
}

TEST_CASE("derived_full frequency is above the bound at a=b=2, c=1, l=3") {
  ExperimentParams p;
  p.a = p.b = 2;
  p.c = 1;
  p.q = 2;
  p.l = 3;
  const auto r = exhaustive_mode(ExperimentKind::DerivedFull, p);
  REQUIRE(r.paper_bound);
  CHECK(*r.paper_bound == doctest::Approx(1 - std::pow(2.0, -4)));
  CHECK(r.frequency >= *r.paper_bound);
}

TEST_CASE("lambda_end reports a modal value and a flag when a = b") {
  ExperimentParams p;
  p.a = p.b = 2;
  p.c = 4;
  p.q = 5;
  const auto r = estimate(ExperimentKind::LambdaEnd, p, 200, 1, 1);
  CHECK(r.modal.has_value());
  CHECK_FALSE(r.note.empty());
}

TEST_CASE("bad parameters") {
  CHECK_THROWS_AS(estimate(ExperimentKind::Span, span_params(0, 1, 2), 10, 1), InvalidArgument);
  CHECK_THROWS_AS(estimate(ExperimentKind::Span, span_params(1, 1, 6), 10, 1), InvalidArgument);
  CHECK_THROWS_AS(exhaustive_mode(ExperimentKind::Span, span_params(4, 6, 5), 1000), CapExceeded);
  CHECK(experiment_kind_from_string("lambda_end") == ExperimentKind::LambdaEnd);
  CHECK_THROWS_AS(experiment_kind_from_string("nope"), InvalidArgument);
}
