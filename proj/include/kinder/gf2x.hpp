#pragma once

// GF(2)[x] polynomials packed 64 coefficients per word, and the binary field
// F_{2^n} = GF(2)[x]/(f) built on them. Reduction exploits a sparse,
// low-degree tail in f, which the default modulus always has.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kinder/arith.hpp"
#include "kinder/gf.hpp"

namespace kinder {

class BitPoly {
 public:
  BitPoly() = default;
  static BitPoly monomial(std::size_t k);
  static BitPoly from_coeffs(std::span<const std::uint32_t> coeffs);
  static BitPoly from_words(std::vector<std::uint64_t> words);

  // -1 for the zero polynomial.
  long degree() const;
  bool is_zero() const { return degree() < 0; }
  bool bit(std::size_t i) const {
    const std::size_t w = i / 64;
    return w < words_.size() && ((words_[w] >> (i % 64)) & 1u);
  }
  void set_bit(std::size_t i, bool value = true);
  void flip_bit(std::size_t i);

  BitPoly& operator^=(const BitPoly& other);
  friend BitPoly operator^(BitPoly a, const BitPoly& b) { return a ^= b; }
  friend BitPoly operator*(const BitPoly& a, const BitPoly& b);
  bool operator==(const BitPoly& other) const;

  BitPoly square() const;
  BitPoly shifted_left(std::size_t k) const;
  // Plain long division remainder.
  BitPoly mod(const BitPoly& f) const;
  static BitPoly gcd(BitPoly a, BitPoly b);

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& mutable_words() { return words_; }
  // Coefficients 0..len-1.
  std::vector<std::uint32_t> coeffs(std::size_t len) const;
  void trim();
  void resize_words(std::size_t n) { words_.resize(n, 0); }

 private:
  std::vector<std::uint64_t> words_;
};

// 64x64 -> 128 carry-less product.
void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi);

// Irreducibility over GF(2) by Rabin's test.
bool is_irreducible_gf2(const BitPoly& f);
// Lexicographically smallest monic irreducible of degree n over GF(2),
// ordering by the integer value of the non-leading coefficients.
BitPoly smallest_irreducible_gf2(std::uint32_t n);

class BinaryField;
using BinaryFieldPtr = std::shared_ptr<const BinaryField>;

class BinaryField {
 public:
  // Elements are reduced BitPolys with exactly words() words.
  using Elem = BitPoly;

  static BinaryFieldPtr make(std::uint32_t degree, const std::optional<Poly>& modulus = std::nullopt);

  std::uint32_t degree() const { return n_; }
  std::size_t words() const { return words_; }
  const BitPoly& modulus() const { return modulus_; }
  Poly modulus_coeffs() const;
  // A generator of the multiplicative group, only when 2^n - 1 factors by
  // trial division (n <= 64).
  const std::optional<Elem>& primitive() const { return primitive_; }

  Elem zero() const;
  Elem one() const;
  Elem x() const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem square(const Elem& a) const;
  Elem pow2k(const Elem& a, std::uint64_t k) const;  // a^(2^k)
  Elem pow(const Elem& a, const BigInt& exponent) const;
  Elem inv(const Elem& a) const;
  Elem frobenius(const Elem& a, std::uint64_t i = 1) const { return pow2k(a, i); }
  std::uint32_t trace(const Elem& a) const;
  Elem reduce(BitPoly a) const;

  std::vector<std::uint32_t> to_vector(const Elem& a) const;
  Elem from_vector(std::span<const std::uint32_t> v) const;

  // Fixed-width lowercase hex of the integer sum c_i 2^i, most significant
  // digit first, ceil(n/4) digits.
  std::string to_hex(const Elem& a) const;
  Elem from_hex(const std::string& hex) const;

  template <class Rng>
  Elem random(Rng& rng) const {
    Elem r;
    auto& w = r.mutable_words();
    w.resize(words_);
    for (auto& x : w) x = rng();
    if (n_ % 64) w.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    return r;
  }

  bool operator==(const BinaryField& other) const {
    return n_ == other.n_ && modulus_ == other.modulus_;
  }

 private:
  BinaryField() = default;
  void normalize(Elem& a) const;

  std::uint32_t n_ = 0;
  std::size_t words_ = 0;
  BitPoly modulus_;
  std::vector<std::uint32_t> tail_;  // exponents below n with coefficient 1
  bool sparse_ = false;
  std::optional<Elem> primitive_;
};

}  // namespace kinder
