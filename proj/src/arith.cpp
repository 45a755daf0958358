#include "kinder/arith.hpp"

#include <cmath>

#include "kinder/errors.hpp"
#include "kinder/gf.hpp"

namespace kinder {

BigInt FactoredInteger::product() const {
  BigInt r = 1;
  for (const auto& [p, k] : factors) r *= ipow(BigInt(p), k);
  return r;
}

FactoredInteger factorize(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("cannot factor 0");
  FactoredInteger f;
  f.value = n;
  for (std::uint64_t d = 2; d <= n / d; d += (d == 2 ? 1 : 2)) {
    std::uint32_t k = 0;
    while (n % d == 0) {
      n /= d;
      ++k;
    }
    if (k) f.factors.emplace_back(d, k);
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

std::uint32_t nu_p(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw InvalidArgument("nu_p is undefined at 0");
  if (!is_prime(p)) throw InvalidArgument("nu_p needs a prime");
  std::uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint32_t nu_p(const BigInt& n_in, std::uint64_t p) {
  if (n_in <= 0) throw InvalidArgument("nu_p needs a positive integer");
  if (!is_prime(p)) throw InvalidArgument("nu_p needs a prime");
  BigInt n = n_in;
  std::uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint32_t mu(std::uint64_t n) {
  if (n < 2) throw InvalidArgument("mu needs n >= 2");
  std::uint32_t best = 0;
  for (const auto& [_, k] : factorize(n).factors) best = std::max(best, k);
  return best;
}

std::uint64_t legendre_valuation(std::uint64_t k, std::uint64_t p) {
  if (!is_prime(p)) throw InvalidArgument("legendre_valuation needs a prime");
  std::uint64_t total = 0;
  for (std::uint64_t pk = p; pk <= k; pk *= p) {
    total += k / pk;
    if (pk > k / p) break;
  }
  return total;
}

double wall_log_bound(std::uint64_t n) {
  if (n < 2) throw InvalidArgument("wall_log_bound needs n >= 2");
  return (mu(n) + 1.0) * std::log2(static_cast<double>(n));
}

BigInt factorial(std::uint32_t k) {
  BigInt r = 1;
  for (std::uint32_t i = 2; i <= k; ++i) r *= i;
  return r;
}

BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt r = 1;
  BigInt b = base;
  while (exponent) {
    if (exponent & 1) r *= b;
    b *= b;
    exponent >>= 1;
  }
  return r;
}

double log_base(const BigInt& value, double base) {
  if (value <= 0) throw InvalidArgument("log of a non-positive integer");
  // Split off 2^shift so the remaining part converts to double exactly enough.
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  const std::size_t shift = bits > 60 ? bits - 60 : 0;
  const BigInt top = value >> shift;
  const double l2 = std::log2(top.convert_to<double>()) + static_cast<double>(shift);
  return l2 / std::log2(base);
}

BigInt gl_order(std::uint32_t n, std::uint64_t q) {
  BigInt r = 1;
  const BigInt qn = ipow(BigInt(q), n);
  for (std::uint32_t i = 0; i < n; ++i) r *= qn - ipow(BigInt(q), i);
  return r;
}

BigInt sp_order(std::uint32_t n, std::uint64_t q) {
  BigInt r = ipow(BigInt(q), std::uint64_t{n} * n);
  for (std::uint32_t i = 1; i <= n; ++i) r *= ipow(BigInt(q), 2 * i) - 1;
  return r;
}

BigInt gsp_order(std::uint32_t n, std::uint64_t q) { return sp_order(n, q) * (q - 1); }

BigInt psl2_order(std::uint64_t q) {
  const BigInt Q = q;
  const BigInt full = Q * (Q * Q - 1);
  return q % 2 == 0 ? full : full / 2;
}

}  // namespace kinder
