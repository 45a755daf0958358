#pragma once

// Integer utilities: factorization by trial division, p-adic valuations,
// mu(n), Legendre's factorial valuation, the Wall-type subgroup bound, and
// exact orders of the small matrix groups used by the orbit bounds.

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kinder {

using BigInt = boost::multiprecision::cpp_int;

struct FactoredInteger {
  std::uint64_t value = 1;
  // (prime, exponent) with strictly increasing primes.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;

  BigInt product() const;
};

FactoredInteger factorize(std::uint64_t n);

// Largest v with p^v | n. Throws for n = 0 or non-prime p.
std::uint32_t nu_p(std::uint64_t n, std::uint64_t p);
std::uint32_t nu_p(const BigInt& n, std::uint64_t p);

// max over primes p | n of nu_p(n); requires n >= 2.
std::uint32_t mu(std::uint64_t n);

// Exponent of p in k!.
std::uint64_t legendre_valuation(std::uint64_t k, std::uint64_t p);

// log2 of n^(mu(n)+1).
double wall_log_bound(std::uint64_t n);

BigInt factorial(std::uint32_t k);
BigInt ipow(const BigInt& base, std::uint64_t exponent);
double log_base(const BigInt& value, double base);

// |GL_n(q)|, |Sp_{2n}(q)|, |GSp_{2n}(q)|, |PSL_2(q)|.
BigInt gl_order(std::uint32_t n, std::uint64_t q);
BigInt sp_order(std::uint32_t n, std::uint64_t q);
BigInt gsp_order(std::uint32_t n, std::uint64_t q);
BigInt psl2_order(std::uint64_t q);

}  // namespace kinder
