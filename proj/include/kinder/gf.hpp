#pragma once

// Finite fields F_{p^e} of small order (at most 2^16 elements), stored as
// integer codes whose base-p digits are the power-basis coordinates.
// Large binary fields live in gf2x.hpp.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kinder {

// Polynomial over F_p, coefficients lowest degree first.
using Poly = std::vector<std::uint32_t>;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

bool is_prime(std::uint64_t n);

namespace poly {
// Arithmetic in F_p[x]; all results are trimmed (no trailing zeros).
Poly trim(Poly a);
int degree(const Poly& a);
Poly add(const Poly& a, const Poly& b, std::uint32_t p);
Poly sub(const Poly& a, const Poly& b, std::uint32_t p);
Poly mul(const Poly& a, const Poly& b, std::uint32_t p);
Poly mod(const Poly& a, const Poly& f, std::uint32_t p);
Poly gcd(Poly a, Poly b, std::uint32_t p);
Poly powmod(const Poly& base, std::uint64_t exponent, const Poly& f, std::uint32_t p);
// Rabin's test: f monic of degree n is irreducible iff x^{p^n} = x mod f and
// gcd(x^{p^{n/r}} - x, f) = 1 for each prime r | n.
bool is_irreducible(const Poly& f, std::uint32_t p);
// Lexicographically smallest monic irreducible of the given degree, ordering
// by the integer sum c_i p^i of the non-leading coefficients.
Poly smallest_irreducible(std::uint32_t p, std::uint32_t degree);
}  // namespace poly

class Field {
 public:
  using Elem = std::uint32_t;
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 16;

  // Throws InvalidArgument for non-prime p, e = 0, orders above kMaxOrder,
  // or a supplied modulus that is not monic, of degree e, and irreducible.
  static FieldPtr make(std::uint32_t p, std::uint32_t e,
                       const std::optional<Poly>& modulus = std::nullopt);
  // q must be a prime power.
  static FieldPtr of_order(std::uint64_t q);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return e_; }
  std::uint32_t order() const { return q_; }
  const Poly& modulus() const { return modulus_; }
  Elem primitive() const { return primitive_; }
  // Root of the modulus; generates the power basis.
  Elem generator() const;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool valid(Elem a) const { return a < q_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t exponent) const;
  // a^(p^i).
  Elem frobenius(Elem a, std::uint32_t i = 1) const;
  // Absolute trace to F_p, returned as an integer in [0, p).
  std::uint32_t trace(Elem a) const;
  // Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const;
  // log to the primitive element; a must be nonzero.
  std::uint32_t log(Elem a) const;
  Elem exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }
  std::uint32_t multiplicative_order(Elem a) const;

  std::vector<std::uint32_t> to_vector(Elem a) const;
  Elem from_vector(std::span<const std::uint32_t> v) const;

  // Same characteristic, degree, and modulus.
  bool operator==(const Field& other) const;
  std::string describe() const;

 private:
  Field() = default;
  Elem slow_mul(Elem a, Elem b) const;
  Elem digit_add(Elem a, Elem b) const;

  std::uint32_t p_ = 0;
  std::uint32_t e_ = 0;
  std::uint32_t q_ = 0;
  Poly modulus_;
  Elem primitive_ = 0;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> neg_;
  std::vector<std::uint16_t> add_table_;
};

bool same_field(const Field& a, const Field& b);

}  // namespace kinder
