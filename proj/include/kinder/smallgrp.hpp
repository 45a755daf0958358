#pragma once

// Explicit finite groups given by a Cayley table, with subgroup enumeration,
// isomorphism testing, and the subgroup counts sigma and sigma_iota.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kinder/errors.hpp"

namespace kinder {

class SmallGroup {
 public:
  using Index = std::uint32_t;

  SmallGroup() = default;
  // table[i * n + j] = i * j. Identity and inverses are found, not assumed.
  static SmallGroup from_table(std::vector<Index> table, std::size_t n);

  // Closure of `gens` under `mul` by breadth-first search. Returns the group
  // and the element labels (label[i] is element i; label[0] is `identity`).
  template <class T, class Mul, class Hash = std::hash<T>>
  static std::pair<SmallGroup, std::vector<T>> generate(const std::vector<T>& gens, Mul mul,
                                                        const T& identity, std::size_t cap);

  static SmallGroup cyclic(std::size_t n);
  static SmallGroup dihedral(std::size_t n);  // order 2n
  static SmallGroup symmetric(std::size_t n);
  static SmallGroup alternating(std::size_t n);
  static SmallGroup elementary_abelian(std::uint32_t p, std::uint32_t k);
  static SmallGroup direct_product(const SmallGroup& g, const SmallGroup& h);
  // Group generated by permutations of {0..n-1}; composition (p*q)(x) = q(p(x)).
  static SmallGroup from_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                      std::size_t cap = 1u << 20);

  std::size_t order() const { return n_; }
  Index identity() const { return identity_; }
  Index mul(Index a, Index b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Index inv(Index a) const { return inverse_[a]; }
  Index pow(Index a, std::int64_t k) const;
  Index commutator(Index a, Index b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  std::uint32_t element_order(Index a) const;
  const std::vector<Index>& table() const { return table_; }

  // Exhaustive associativity / identity / inverse check.
  bool verify_axioms() const;

  // Subgroup generated by `gens`, as a sorted element list.
  std::vector<Index> closure(const std::vector<Index>& gens) const;
  // Group structure on a subset closed under multiplication (sorted list).
  SmallGroup induced(const std::vector<Index>& elements) const;
  bool is_subgroup(const std::vector<Index>& elements) const;

  std::vector<Index> center() const;
  // Subgroup generated by all commutators [a,b] with a in A, b in B.
  std::vector<Index> commutator_subgroup(const std::vector<Index>& A,
                                         const std::vector<Index>& B) const;
  std::vector<Index> derived_subgroup() const;
  std::vector<Index> all_elements() const;

 private:
  std::size_t n_ = 0;
  Index identity_ = 0;
  std::vector<Index> table_;
  std::vector<Index> inverse_;
};

template <class T, class Mul, class Hash>
std::pair<SmallGroup, std::vector<T>> SmallGroup::generate(const std::vector<T>& gens, Mul mul,
                                                           const T& identity, std::size_t cap) {
  std::vector<T> elems{identity};
  std::unordered_map<T, Index, Hash> index;
  index.emplace(identity, 0);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      T y = mul(elems[i], g);
      if (index.find(y) == index.end()) {
        if (elems.size() >= cap) {
          throw CapExceeded("group generated exceeds " + std::to_string(cap) + " elements");
        }
        index.emplace(y, static_cast<Index>(elems.size()));
        elems.push_back(std::move(y));
      }
    }
  }
  const std::size_t n = elems.size();
  std::vector<Index> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto it = index.find(mul(elems[i], elems[j]));
      if (it == index.end()) throw PropertyViolation("generated set is not closed");
      table[i * n + j] = it->second;
    }
  }
  return {from_table(std::move(table), n), std::move(elems)};
}

constexpr std::size_t kDefaultSubgroupCap = 2048;
constexpr std::size_t kDefaultIsoCap = 512;

// Every subgroup exactly once, as sorted element lists: cyclic subgroups
// first, then joins with cyclic subgroups until nothing new appears.
std::vector<std::vector<SmallGroup::Index>> all_subgroups(const SmallGroup& g,
                                                          std::size_t cap = kDefaultSubgroupCap);

struct IsoFingerprint {
  std::size_t order = 0;
  std::map<std::uint32_t, std::uint32_t> element_orders;  // order -> count
  std::size_t center_order = 0;
  std::vector<std::size_t> derived_series;  // orders G, G', G'', ... down to stable
  // For each prime power d dividing |G/G'|, #{x in G/G' : x^d = 1}; these
  // determine the abelian invariants.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> abelianization;
  std::uint64_t exponent = 1;
  // Histogram of (element order, centralizer order, number of square roots).
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> classes;

  bool operator==(const IsoFingerprint&) const = default;
  bool operator<(const IsoFingerprint& o) const;
  std::string summary() const;
};

IsoFingerprint fingerprint(const SmallGroup& g);

// An isomorphism a -> b as the image of each element, or nullopt.
std::optional<std::vector<SmallGroup::Index>> find_isomorphism(const SmallGroup& a,
                                                               const SmallGroup& b);
bool is_isomorphism(const SmallGroup& a, const SmallGroup& b,
                    const std::vector<SmallGroup::Index>& map);

struct IsoClassification {
  std::vector<std::size_t> class_of;           // per input group
  std::vector<std::size_t> representatives;    // input index of each class rep
  // witness[i]: isomorphism from group i to its class representative
  std::vector<std::vector<SmallGroup::Index>> witness;
  std::size_t class_count() const { return representatives.size(); }
};

IsoClassification iso_classes(const std::vector<SmallGroup>& groups,
                              std::size_t cap = kDefaultIsoCap);

struct SigmaCounts {
  std::size_t sigma = 0;
  std::size_t sigma_iota = 0;
  double wall_log2 = 0.0;  // log2 of n^{mu(n)+1}
};

// Throws PropertyViolation if sigma_iota <= sigma <= n^{mu(n)+1} fails.
SigmaCounts sigma_counts(const SmallGroup& g, std::size_t subgroup_cap = kDefaultSubgroupCap,
                         std::size_t iso_cap = kDefaultIsoCap);

// The same group with element i renamed perm[i].
SmallGroup relabel_group(const SmallGroup& g, const std::vector<SmallGroup::Index>& perm);

}  // namespace kinder
