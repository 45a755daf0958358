#pragma once

// Gamma_k = Sym_3^k, the subgroups H(C) between Gamma_2 = C_3^k and Gamma_k
// indexed by binary codes C, recovery of Hamming weights from commutators,
// and permutation-equivalence classes of binary codes.

#include <cstdint>
#include <string>
#include <vector>

#include "kinder/linalg.hpp"
#include "kinder/smallgrp.hpp"

namespace kinder {

// Sym_3 as 0..5: 0 = id, 1 = (0 1 2), 2 = (0 2 1), 3 = (0 1), 4 = (0 2),
// 5 = (1 2). Codes 0..2 are even.
namespace sym3 {
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);
inline bool sign(std::uint8_t a) { return a >= 3; }
}  // namespace sym3

class GammaK {
 public:
  using Word = std::vector<std::uint8_t>;

  // Throws CapExceeded if 6^k exceeds `cap`.
  explicit GammaK(std::size_t k, std::uint64_t cap = 1u << 16);

  std::size_t k() const { return k_; }
  std::uint64_t order() const { return order_; }
  Word decode(std::uint64_t index) const;
  std::uint64_t encode(const Word& w) const;
  Word mul(const Word& a, const Word& b) const;
  Word inv(const Word& a) const;
  Word commutator(const Word& a, const Word& b) const;
  // Sign vector in F_2^k.
  std::vector<Elem> sign(const Word& w) const;
  bool in_gamma2(const Word& w) const;
  std::size_t weight(const Word& w) const;

 private:
  std::size_t k_;
  std::uint64_t order_;
};

struct CodeSubgroup {
  SmallGroup group;
  std::vector<GammaK::Word> labels;  // labels[i] is element i of `group`
};

// Full preimage of C under the sign map. Throws InvalidArgument if C does not
// live in F_2^k.
CodeSubgroup subgroup_from_code(const GammaK& G, const Subspace& C);

// log_3 |<[h,g] : g in Gamma_2>| where Gamma_2 = {x : x^3 = 1} is read off
// the abstract group. Throws InvalidArgument if h is not an element of H and
// PropertyViolation if the order is not a power of 3.
std::size_t hamming_recover(const SmallGroup& H, SmallGroup::Index h);

// Lexicographically least RREF of C over all coordinate permutations.
Subspace canonical_code(const Subspace& C);

struct CodeClassReport {
  std::size_t k = 0, l = 0;
  std::size_t codes = 0;
  std::size_t classes = 0;
  double bound = 0.0;               // 2^{l(k-l)} / k!
  std::uint64_t bound_ceil = 0;     // ceil of the bound
  std::vector<Subspace> canonical;  // one per class, sorted
  std::vector<std::size_t> class_of;  // per code, in enumeration order
  std::vector<Subspace> all_codes;
};

CodeClassReport code_classes(std::size_t k, std::size_t l, std::uint64_t cap = 1'000'000);

}  // namespace kinder
