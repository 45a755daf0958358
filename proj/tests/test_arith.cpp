#include "doctest.h"

#include <cmath>

#include "kinder/arith.hpp"
#include "kinder/errors.hpp"

using namespace kinder;

namespace {
// Valuation by repeated division of every factor 1..k.
std::uint64_t direct_valuation(std::uint64_t k, std::uint64_t p) {
  std::uint64_t v = 0;
  for (std::uint64_t i = 2; i <= k; ++i) {
    for (std::uint64_t j = i; j % p == 0; j /= p) ++v;
  }
  return v;
}
}  // namespace

TEST_CASE("nu_p") {
  CHECK(nu_p(48, 2) == 4);
  CHECK(nu_p(48, 5) == 0);
  CHECK(nu_p(std::uint64_t{3628800}, 2) == 8);
  CHECK(nu_p(factorial(10), 2) == 8);
}

TEST_CASE("mu is the largest prime exponent") {
  CHECK(mu(360) == 3);
  CHECK(mu(243) == 5);
  CHECK(mu(1024) == 10);
  // |PSL_2(F_127)| = 127 (127^2 - 1) / 2 = 2^7 3^2 7 127
  const BigInt order = psl2_order(127);
  CHECK(order == 1024128);
  CHECK(mu(1024128) == 7);
  CHECK(mu(1024128) > nu_p(std::uint64_t{1024128}, 127));
}

TEST_CASE("legendre valuation against direct counting") {
  CHECK(legendre_valuation(10, 2) == 8);
  CHECK(legendre_valuation(4, 5) == 0);
  CHECK(legendre_valuation(7, 7) == 1);
  for (std::uint64_t k = 0; k <= 40; ++k)
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u}) CHECK(legendre_valuation(k, p) == direct_valuation(k, p));
}

TEST_CASE("legendre valuation is strictly below k/(p-1) for k >= 1") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u})
    for (std::uint64_t k = 1; k <= 2000; ++k) CHECK(legendre_valuation(k, p) * (p - 1) < k);
  CHECK(legendre_valuation(0, 2) == 0);
}

TEST_CASE("wall log bound is below (log2 n)^2 except at 3 and powers of 2") {
  for (std::uint64_t n = 2; n <= 20000; ++n) {
    const double l = std::log2(static_cast<double>(n));
    const bool pow2 = (n & (n - 1)) == 0;
    CAPTURE(n);
    CHECK((wall_log_bound(n) > l * l + 1e-9) == (pow2 || n == 3));
  }
}

TEST_CASE("wall log bound") {
  CHECK(wall_log_bound(8) == doctest::Approx(12.0));
  CHECK(wall_log_bound(48) == doctest::Approx(5 * std::log2(48.0)));
}

TEST_CASE("factorization multiplies back") {
  for (std::uint64_t n : {1ull, 2ull, 97ull, 360ull, 1024128ull, 600851475143ull, 1000003ull * 999983ull}) {
    const auto f = factorize(n);
    CHECK(f.product() == n);
    for (std::size_t i = 1; i < f.factors.size(); ++i) CHECK(f.factors[i - 1].first < f.factors[i].first);
  }
}

TEST_CASE("classical group orders") {
  CHECK(gl_order(2, 2) == 6);
  CHECK(gl_order(1, 2) == 1);
  CHECK(gl_order(3, 2) == 168);
  CHECK(sp_order(1, 3) == 24);  // Sp_2 = SL_2
  CHECK(sp_order(2, 2) == 720);
  CHECK(psl2_order(4) == 60);
  CHECK(psl2_order(5) == 60);
}
