#pragma once

// The characteristic 2 group U of type B_2 as a central extension of F^2 by
// F^2, its recurrence labeling, and the Suzuki form search with portable
// certificates.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kinder/gf.hpp"
#include "kinder/gf2x.hpp"
#include "kinder/linalg.hpp"

namespace kinder {

struct B2Elem {
  Elem r = 0, s = 0, z1 = 0, z2 = 0;
  bool operator==(const B2Elem&) const = default;
  auto operator<=>(const B2Elem&) const = default;
};

// (r,s,z1,z2)(r',s',z1',z2') = (r+r', s+s', z1+z1'+r's, z2+z2'+r's^2).
class B2Group {
 public:
  // Throws InvalidArgument in odd characteristic.
  explicit B2Group(FieldPtr F);

  const FieldPtr& field() const { return F_; }
  std::uint64_t order() const;
  B2Elem identity() const { return {}; }
  B2Elem mul(const B2Elem& a, const B2Elem& b) const;
  B2Elem inv(const B2Elem& a) const;
  B2Elem commutator(const B2Elem& a, const B2Elem& b) const;
  std::pair<Elem, Elem> phi(Elem r, Elem s) const;         // (rs, rs^2)
  std::pair<Elem, Elem> bimap(const B2Elem& a, const B2Elem& b) const;  // (rs'+r's, rs'^2+r's^2)

  B2Elem decode(std::uint64_t index) const;
  std::uint64_t encode(const B2Elem& g) const;

  bool in_gamma2(const B2Elem& g) const { return g.s == 0; }
  bool in_gamma3(const B2Elem& g) const { return g.r == 0 && g.s == 0; }
  bool in_gamma4(const B2Elem& g) const { return in_gamma3(g) && g.z1 == 0; }

  // Identity, inverses and the cocycle identity exhaustively (which gives
  // associativity); for |F| <= 4 also every triple of elements.
  std::optional<std::string> verify_axioms() const;
  std::vector<B2Elem> center() const;

 private:
  FieldPtr F_;
};

struct B2LabelInput {
  // Kind Q = {(r,s,z) : s in V}; V must contain w^-1, 1, w.
  Subspace V;
  // Representatives A_i over (w^i, 0) and B_i over (0, w^i), i = -1, 0, 1.
  std::array<B2Elem, 3> A, B;
};

struct B2Labels {
  // A_k for k = -1 .. n, each determined modulo Gamma_3 inside Gamma_2.
  std::vector<B2Elem> A;
  std::vector<B2Elem> gamma4;      // sorted
  std::vector<B2Elem> complement;  // sorted
  // Gamma_3 element -> label in F of its class in Gamma_3 / Gamma_4.
  std::map<B2Elem, Elem> quotient_label;
  // Gamma_4 element -> label in F.
  std::map<B2Elem, Elem> gamma4_label;
  // Image of [Q, A_0] in Gamma_3/Gamma_4 under quotient_label.
  std::vector<Elem> recovered_subspace;  // sorted
};

// Solves the recurrence [A_{k+1},B_-1][A_k,B_0] = [A_{k-2},B_1][A_{k-1},B_0]
// using only products and commutators of group elements. Throws
// InvalidArgument on invalid representatives and PropertyViolation if the
// recurrence has no solution in Q.
B2Labels b2_labels(const B2Group& U, const B2LabelInput& in);

// Random valid representatives for the kind with subspace V.
B2LabelInput random_b2_input(const B2Group& U, const Subspace& V, std::mt19937_64& rng);

// f(x,y) = x y^{2^{e+1}} + y x^{2^{e+1}} on F_{2^{2e+1}}. Throws
// InvalidArgument for even degree.
BinaryField::Elem suzuki_form(const BinaryField& F, const BinaryField::Elem& x,
                              const BinaryField::Elem& y);

std::size_t suzuki_size_bound(std::uint32_t e);  // 3 ceil(sqrt(2e+1))

struct SpanCertificate {
  std::uint32_t e = 0;
  Poly modulus;  // lowest coefficient first
  std::vector<std::string> S;  // hex
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string to_json() const;
  // Throws MalformedInput.
  static SpanCertificate from_json(const std::string& text);
};

struct SearchResult {
  bool found = false;
  std::optional<SpanCertificate> certificate;
  std::size_t best_rank = 0;
  std::size_t restarts = 0;
  std::size_t set_size = 0;
};

struct SearchOptions {
  std::size_t candidates = 24;   // random candidates per greedy step
  std::size_t max_restarts = 64;
  unsigned workers = 1;
};

SearchResult suzuki_search(std::uint32_t e, std::uint64_t seed, const SearchOptions& opts = {});

// True iff the certificate is valid; throws MalformedInput when it cannot be
// parsed or is structurally inconsistent.
bool suzuki_verify(const SpanCertificate& cert);
bool suzuki_verify_json(const std::string& text);

}  // namespace kinder
