#pragma once

// Module nurseries realized as triple groups
//   (x,u,w)(x',u',w') = (x+x', u+u', w+w'+[x,u'])
// with x in R, u, w in M (all as F_p-coordinate vectors) and a bilinear
// bracket [x,u] = x.u. Gamma_2 = {x=0}, Gamma_3 = {x=0,u=0}, Gamma_4 = 1.
// Kinder are the subgroups between Gamma_2 and Gamma_1, one per F_p-subspace
// V of R.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kinder/linalg.hpp"
#include "kinder/smallgrp.hpp"

namespace kinder {

using Vec = std::vector<Elem>;

struct Triple {
  Vec x, u, w;
  bool operator==(const Triple&) const = default;
};

class ModuleNursery;
using NurseryPtr = std::shared_ptr<const ModuleNursery>;

class ModuleNursery {
 public:
  // R = M_a(K), M = M_{a x c}(K) with left multiplication;
  // S = {I, w E_11, sum_i E_{i,(i mod a)+1}} (w generates K over F_p,
  // duplicates dropped) and T = the standard K-basis of M.
  static NurseryPtr matrix(std::size_t a, std::size_t c, const FieldPtr& K);
  // F = F_{p^{2e}} with sigma(x) = x^{p^e}; R = F^sigma, M = {x : x + sigma(x) = 0},
  // S = {1, w} with w a primitive element of R, T = {smallest nonzero code in M}.
  static NurseryPtr unitary(std::uint32_t p, std::uint32_t e);
  // R = M = F_{p^e}, p odd, bracket (x,u) -> 2xu; S = {1, w}, T = {1}.
  static NurseryPtr b2_odd(std::uint32_t p, std::uint32_t e);
  // R = M = F_{3^{2e+1}}, bracket (x,u) -> xu; S = {1, w}, T = {1}.
  static NurseryPtr ree_small(std::uint32_t e);

  // Bracket matrices act on column vectors: [x,u] = sum_i x_i bracket[i] u.
  // ring[i] are matrices of a faithful representation of R (used to check
  // that S generates R as an algebra).
  static NurseryPtr from_parts(std::string name, FieldPtr Fp, std::vector<Matrix> bracket,
                               std::vector<Matrix> ring, std::vector<Vec> S, std::vector<Vec> T);

  const std::string& name() const { return name_; }
  const FieldPtr& prime_field() const { return Fp_; }
  std::uint32_t p() const { return Fp_->characteristic(); }
  std::size_t r() const { return bracket_.size(); }
  std::size_t m() const { return m_; }
  const std::vector<Matrix>& bracket_matrices() const { return bracket_; }
  const std::vector<Vec>& S() const { return S_; }
  const std::vector<Vec>& T() const { return T_; }
  Subspace span_S() const;
  // log_p |Gamma_1| = r + 2m.
  std::size_t log_order() const { return r() + 2 * m_; }

  Vec bracket(const Vec& x, const Vec& u) const;
  Triple identity() const;
  Triple mul(const Triple& a, const Triple& b) const;
  Triple inv(const Triple& a) const;
  Triple commutator(const Triple& a, const Triple& b) const;

  // Checks of the defining properties; each returns a description of the
  // first failure or nullopt.
  std::optional<std::string> check_generation() const;
  std::optional<std::string> check_annihilator() const;
  std::optional<std::string> check_filtration(std::size_t exhaustive_log2_cap = 10) const;
  // Throws PropertyViolation on any failure.
  void verify() const;

 private:
  std::string name_;
  FieldPtr Fp_;
  std::size_t m_ = 0;
  std::vector<Matrix> bracket_;
  std::vector<Matrix> ring_;
  std::vector<Vec> S_;
  std::vector<Vec> T_;
};

// A kind: Q = {(x,u,w) : x in V}.
class Kind {
 public:
  Kind(NurseryPtr nursery, Subspace V);
  const ModuleNursery& nursery() const { return *nursery_; }
  const NurseryPtr& nursery_ptr() const { return nursery_; }
  const Subspace& V() const { return V_; }
  // log_p |Q| = dim V + 2m.
  std::size_t log_order() const { return V_.dim() + 2 * nursery_->m(); }
  bool contains(const Triple& t) const;

  // Cayley table of Q with element labels; throws CapExceeded above `cap`.
  std::pair<SmallGroup, std::vector<Triple>> to_group(std::size_t cap = 4096) const;

 private:
  NurseryPtr nursery_;
  Subspace V_;
};

// Throws InvalidArgument unless S lies in V (skipped when relaxed).
Kind kind_from_subspace(const NurseryPtr& nursery, const Subspace& V, bool relaxed = false);

// [Q,Q] = Gamma_3, i.e. span{x.u : x in V, u in M} = M.
bool derived_equals_gamma3(const Kind& q);

// Coordinate projections of abstract group elements, used for validation
// of (rho, mu) and to express chi in coordinates.
struct CoordinateOracle {
  std::function<Vec(SmallGroup::Index)> alpha;  // R-part
  std::function<Vec(SmallGroup::Index)> beta;   // M-part of Gamma_2 elements
  std::function<Vec(SmallGroup::Index)> gamma;  // M-part of Gamma_3 elements
};

struct Reconstruction {
  std::vector<SmallGroup::Index> X, Y, Z;  // sorted
  // chi(q) for q running over a basis of Q/X, as m x m matrices over F_p.
  std::vector<Matrix> chi;
  bool chi_injective = false;
  bool chi_in_ring_image = false;
  bool chi_matches_rho = false;
};

// Recovers Gamma_2, Gamma_3, Gamma_4 of the abstract group Q from rho : S -> Q
// and mu : T -> Q. Throws InvalidArgument if rho or mu violate their
// alpha/beta constraints, and PropertyViolation if X is not Gamma_2 (e.g.
// when T has a nonzero common annihilator).
Reconstruction reconstruct(const SmallGroup& Q, const ModuleNursery& nursery,
                           const std::vector<Vec>& S, const std::vector<Vec>& T,
                           const std::vector<SmallGroup::Index>& rho,
                           const std::vector<SmallGroup::Index>& mu, const CoordinateOracle& oracle);

// Builds the kind on V, hides it behind a random relabelling, draws random
// valid (rho, mu) and compares the output of reconstruct with the true
// Gamma_2, Gamma_3 and Gamma_4 = 1.
struct RoundTrip {
  bool exact = false;
  std::size_t order = 0;
  std::string failure;
};
RoundTrip reconstruct_round_trip(const NurseryPtr& nursery, const Subspace& V, std::mt19937_64& rng);

enum class BoundFormula { NurseryCount, OrbitUpper, CoroUdLower };
std::string to_string(BoundFormula f);
BoundFormula bound_formula_from_string(const std::string& name);

struct BoundParams {
  // nursery_count
  std::int64_t r = 0, l = 0, s = 0, m = 0, t = 0;
  // orbit_upper (a, b, c, e, p) and coro_ud_lower (a, e, l)
  std::int64_t a = 0, b = 0, c = 0, e = 0;
  std::uint64_t p = 2;
};

struct BoundValue {
  double raw = 0.0;      // exponent as stated (base p)
  double clamped = 0.0;  // max(raw, 0)
  std::string detail;
};

BoundValue bound_log(BoundFormula formula, const BoundParams& params);

// The three exponents quoted for |U_d(F_{p^e})| = p^nu: binom(d-1,2) e,
// d^2 e / 4, and the true e d(d-1)/2.
struct UnitriangularExponents {
  double binomial_form = 0, quadratic_form = 0, exact = 0;
};
UnitriangularExponents unitriangular_exponents(std::uint32_t d, std::uint32_t e);

struct CensusClass {
  IsoFingerprint fingerprint;
  Subspace representative;
  std::size_t members = 0;
};

struct CensusResult {
  std::size_t kinder = 0;
  std::size_t classes = 0;
  std::size_t group_order = 0;
  std::vector<CensusClass> table;
  BoundValue bound;  // nursery_count with this nursery's r, s, m, t
  bool bound_holds = false;
};

struct CensusCaps {
  std::uint64_t max_kinder = 100'000;
  std::size_t iso_cap = kDefaultIsoCap;
};

// All kinder with dim V = l (containing span(S) unless relaxed), classified
// up to isomorphism.
CensusResult census(const NurseryPtr& nursery, std::size_t l, const CensusCaps& caps = {},
                    bool relaxed = false);

// Subspaces V of F^n with W <= V and dim V = l.
std::vector<Subspace> subspaces_containing(const Subspace& W, std::size_t l,
                                           std::uint64_t cap = kDefaultSubspaceCap);

}  // namespace kinder
