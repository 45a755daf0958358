#include "kinder/smallgrp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "kinder/arith.hpp"

namespace kinder {

using Index = SmallGroup::Index;

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) h = (h ^ x) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace

SmallGroup SmallGroup::from_table(std::vector<Index> table, std::size_t n) {
  if (n == 0 || table.size() != n * n) throw InvalidArgument("Cayley table has the wrong size");
  for (auto x : table) {
    if (x >= n) throw InvalidArgument("Cayley table entry out of range");
  }
  SmallGroup g;
  g.n_ = n;
  g.table_ = std::move(table);
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      ok = g.table_[e * n + x] == x && g.table_[x * n + e] == x;
    }
    if (ok) {
      g.identity_ = static_cast<Index>(e);
      found = true;
    }
  }
  if (!found) throw InvalidArgument("Cayley table has no identity");
  g.inverse_.assign(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    bool ok = false;
    for (std::size_t y = 0; y < n; ++y) {
      if (g.table_[x * n + y] == g.identity_) {
        g.inverse_[x] = static_cast<Index>(y);
        ok = true;
        break;
      }
    }
    if (!ok) throw InvalidArgument("Cayley table element without inverse");
  }
  return g;
}

SmallGroup SmallGroup::cyclic(std::size_t n) {
  std::vector<Index> t(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Index>((a + b) % n);
  }
  return from_table(std::move(t), n);
}

SmallGroup SmallGroup::dihedral(std::size_t n) {
  // r^i s^j as i + n j; s r = r^{-1} s.
  const std::size_t N = 2 * n;
  std::vector<Index> t(N * N);
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = 0; y < N; ++y) {
      const std::size_t i = x % n, j = x / n, k = y % n, l = y / n;
      const std::size_t ri = j ? (i + n - k) % n : (i + k) % n;
      t[x * N + y] = static_cast<Index>(ri + n * ((j + l) % 2));
    }
  }
  return from_table(std::move(t), N);
}

SmallGroup SmallGroup::from_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                         std::size_t cap) {
  if (gens.empty()) return cyclic(1);
  const std::size_t n = gens.front().size();
  std::vector<std::uint32_t> id(n);
  std::iota(id.begin(), id.end(), 0u);
  auto compose = [](const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q) {
    std::vector<std::uint32_t> r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) r[x] = q[p[x]];
    return r;
  };
  return generate<std::vector<std::uint32_t>, decltype(compose), VecHash>(gens, compose, id, cap)
      .first;
}

SmallGroup SmallGroup::symmetric(std::size_t n) {
  if (n <= 1) return cyclic(1);
  std::vector<std::uint32_t> swap01(n), cycle(n);
  std::iota(swap01.begin(), swap01.end(), 0u);
  std::swap(swap01[0], swap01[1]);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
  return from_permutations({swap01, cycle});
}

SmallGroup SmallGroup::alternating(std::size_t n) {
  if (n <= 2) return cyclic(1);
  std::vector<std::vector<std::uint32_t>> gens;
  for (std::size_t i = 2; i < n; ++i) {
    std::vector<std::uint32_t> c(n);
    std::iota(c.begin(), c.end(), 0u);
    c[0] = 1;
    c[1] = static_cast<std::uint32_t>(i);
    c[i] = 0;
    gens.push_back(c);
  }
  return from_permutations(gens);
}

SmallGroup SmallGroup::elementary_abelian(std::uint32_t p, std::uint32_t k) {
  std::size_t n = 1;
  for (std::uint32_t i = 0; i < k; ++i) n *= p;
  std::vector<Index> t(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t x = a, y = b, r = 0, place = 1;
      for (std::uint32_t i = 0; i < k; ++i) {
        r += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
      }
      t[a * n + b] = static_cast<Index>(r);
    }
  }
  return from_table(std::move(t), n);
}

SmallGroup SmallGroup::direct_product(const SmallGroup& g, const SmallGroup& h) {
  const std::size_t n = g.order() * h.order();
  std::vector<Index> t(n * n);
  const std::size_t hn = h.order();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      t[x * n + y] = static_cast<Index>(
          g.mul(static_cast<Index>(x / hn), static_cast<Index>(y / hn)) * hn +
          h.mul(static_cast<Index>(x % hn), static_cast<Index>(y % hn)));
    }
  }
  return from_table(std::move(t), n);
}

Index SmallGroup::pow(Index a, std::int64_t k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  Index r = identity_;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

std::uint32_t SmallGroup::element_order(Index a) const {
  std::uint32_t k = 1;
  Index x = a;
  while (x != identity_) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

bool SmallGroup::verify_axioms() const {
  for (Index a = 0; a < n_; ++a) {
    if (mul(identity_, a) != a || mul(a, identity_) != a) return false;
    if (mul(a, inv(a)) != identity_ || mul(inv(a), a) != identity_) return false;
    for (Index b = 0; b < n_; ++b) {
      const Index ab = mul(a, b);
      for (Index c = 0; c < n_; ++c) {
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    }
  }
  return true;
}

std::vector<Index> SmallGroup::closure(const std::vector<Index>& gens) const {
  std::vector<char> in(n_, 0);
  std::vector<Index> elems{identity_};
  in[identity_] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (Index g : gens) {
      const Index y = mul(elems[i], g);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool SmallGroup::is_subgroup(const std::vector<Index>& elements) const {
  if (elements.empty()) return false;
  std::vector<char> in(n_, 0);
  for (auto x : elements) in[x] = 1;
  if (!in[identity_]) return false;
  for (auto a : elements) {
    if (!in[inv(a)]) return false;
    for (auto b : elements) {
      if (!in[mul(a, b)]) return false;
    }
  }
  return true;
}

SmallGroup SmallGroup::induced(const std::vector<Index>& elements) const {
  std::vector<Index> pos(n_, static_cast<Index>(-1));
  for (std::size_t i = 0; i < elements.size(); ++i) pos[elements[i]] = static_cast<Index>(i);
  const std::size_t k = elements.size();
  std::vector<Index> t(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const Index p = pos[mul(elements[i], elements[j])];
      if (p == static_cast<Index>(-1)) throw InvalidArgument("subset is not closed");
      t[i * k + j] = p;
    }
  }
  return from_table(std::move(t), k);
}

std::vector<Index> SmallGroup::all_elements() const {
  std::vector<Index> v(n_);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

std::vector<Index> SmallGroup::center() const {
  std::vector<Index> z;
  for (Index a = 0; a < n_; ++a) {
    bool central = true;
    for (Index b = 0; b < n_ && central; ++b) central = mul(a, b) == mul(b, a);
    if (central) z.push_back(a);
  }
  return z;
}

std::vector<Index> SmallGroup::commutator_subgroup(const std::vector<Index>& A,
                                                   const std::vector<Index>& B) const {
  std::vector<char> seen(n_, 0);
  std::vector<Index> gens;
  for (auto a : A) {
    for (auto b : B) {
      const Index c = commutator(a, b);
      if (!seen[c]) {
        seen[c] = 1;
        gens.push_back(c);
      }
    }
  }
  return closure(gens);
}

std::vector<Index> SmallGroup::derived_subgroup() const {
  const auto all = all_elements();
  return commutator_subgroup(all, all);
}

std::vector<std::vector<Index>> all_subgroups(const SmallGroup& g, std::size_t cap) {
  if (g.order() > cap) {
    throw CapExceeded("subgroup enumeration needs |G| <= " + std::to_string(cap) + ", got " +
                      std::to_string(g.order()));
  }
  const std::size_t n = g.order();
  struct Sub {
    std::vector<Index> elems;
    std::vector<Index> gens;
    std::vector<char> member;
  };
  std::vector<Sub> subs;
  std::unordered_map<std::vector<Index>, std::size_t, VecHash> seen;
  auto add = [&](std::vector<Index> elems, std::vector<Index> gens) -> bool {
    if (seen.count(elems)) return false;
    seen.emplace(elems, subs.size());
    Sub s{std::move(elems), std::move(gens), std::vector<char>(n, 0)};
    for (auto x : s.elems) s.member[x] = 1;
    subs.push_back(std::move(s));
    return true;
  };
  std::vector<Index> cyclic_gens;
  for (Index x = 0; x < n; ++x) {
    if (add(g.closure({x}), {x})) cyclic_gens.push_back(x);
  }
  std::vector<std::size_t> frontier(subs.size());
  std::iota(frontier.begin(), frontier.end(), std::size_t{0});
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t h : frontier) {
      for (Index c : cyclic_gens) {
        if (subs[h].member[c]) continue;
        std::vector<Index> gens = subs[h].gens;
        gens.push_back(c);
        if (add(g.closure(gens), gens)) next.push_back(subs.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<Index>> out;
  out.reserve(subs.size());
  for (auto& s : subs) out.push_back(std::move(s.elems));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

namespace {

using ElementInvariant = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

std::vector<ElementInvariant> element_invariants(const SmallGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::uint32_t> roots(n, 0);
  for (Index y = 0; y < n; ++y) ++roots[g.mul(y, y)];
  std::vector<ElementInvariant> inv(n);
  for (Index x = 0; x < n; ++x) {
    std::uint32_t cent = 0;
    for (Index y = 0; y < n; ++y) cent += g.mul(x, y) == g.mul(y, x) ? 1 : 0;
    inv[x] = {g.element_order(x), cent, roots[x]};
  }
  return inv;
}

}  // namespace

bool IsoFingerprint::operator<(const IsoFingerprint& o) const {
  return std::tie(order, element_orders, center_order, derived_series, abelianization, exponent,
                  classes) < std::tie(o.order, o.element_orders, o.center_order, o.derived_series,
                                      o.abelianization, o.exponent, o.classes);
}

std::string IsoFingerprint::summary() const {
  std::ostringstream os;
  os << "order " << order << ", center " << center_order << ", exponent " << exponent
     << ", derived";
  for (auto d : derived_series) os << ' ' << d;
  os << ", element orders";
  for (const auto& [o, c] : element_orders) os << ' ' << o << ':' << c;
  return os.str();
}

IsoFingerprint fingerprint(const SmallGroup& g) {
  IsoFingerprint f;
  const std::size_t n = g.order();
  f.order = n;
  const auto inv = element_invariants(g);
  for (Index x = 0; x < n; ++x) {
    const auto ord = std::get<0>(inv[x]);
    ++f.element_orders[ord];
    f.exponent = std::lcm(f.exponent, static_cast<std::uint64_t>(ord));
    ++f.classes[inv[x]];
    if (std::get<1>(inv[x]) == n) ++f.center_order;
  }
  std::vector<Index> cur = g.all_elements();
  f.derived_series.push_back(cur.size());
  while (true) {
    auto next = g.commutator_subgroup(cur, cur);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
    f.derived_series.push_back(cur.size());
  }
  const auto D = f.derived_series.size() > 1 ? g.derived_subgroup() : g.all_elements();
  std::vector<char> inD(n, 0);
  for (auto x : D) inD[x] = 1;
  const std::uint64_t m = n / D.size();
  if (m > 1) {
    for (const auto& [p, k] : factorize(m).factors) {
      std::uint64_t d = 1;
      for (std::uint32_t i = 1; i <= k; ++i) {
        d *= p;
        std::uint64_t count = 0;
        for (Index x = 0; x < n; ++x) count += inD[g.pow(x, static_cast<std::int64_t>(d))] ? 1 : 0;
        f.abelianization.emplace_back(d, count / D.size());
      }
    }
  }
  return f;
}

bool is_isomorphism(const SmallGroup& a, const SmallGroup& b, const std::vector<Index>& map) {
  if (a.order() != b.order() || map.size() != a.order()) return false;
  std::vector<char> hit(b.order(), 0);
  for (auto y : map) {
    if (y >= b.order() || hit[y]) return false;
    hit[y] = 1;
  }
  for (Index x = 0; x < a.order(); ++x) {
    for (Index y = 0; y < a.order(); ++y) {
      if (map[a.mul(x, y)] != b.mul(map[x], map[y])) return false;
    }
  }
  return true;
}

namespace {

constexpr std::uint64_t kIsoSearchBudget = 50'000'000;

class IsoSearch {
 public:
  IsoSearch(const SmallGroup& a, const SmallGroup& b) : a_(a), b_(b) {
    inv_a_ = element_invariants(a);
    inv_b_ = element_invariants(b);
  }

  std::optional<std::vector<Index>> run() {
    choose_generators();
    for (auto g : gens_) {
      std::vector<Index> cands;
      for (Index y = 0; y < b_.order(); ++y) {
        if (inv_b_[y] == inv_a_[g]) cands.push_back(y);
      }
      if (cands.empty()) return std::nullopt;
      candidates_.push_back(std::move(cands));
    }
    images_.assign(gens_.size(), 0);
    if (!search(0)) return std::nullopt;
    return map_;
  }

 private:
  void choose_generators() {
    // Prefer elements whose invariant is rare in the group, then large order.
    std::map<ElementInvariant, std::size_t> freq;
    for (const auto& iv : inv_a_) ++freq[iv];
    std::vector<Index> order(a_.order());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
      const auto fx = freq[inv_a_[x]], fy = freq[inv_a_[y]];
      if (fx != fy) return fx < fy;
      return std::get<0>(inv_a_[x]) > std::get<0>(inv_a_[y]);
    });
    std::vector<Index> span{a_.identity()};
    std::vector<char> in(a_.order(), 0);
    in[a_.identity()] = 1;
    for (Index x : order) {
      if (span.size() == a_.order()) break;
      if (in[x]) continue;
      gens_.push_back(x);
      span = a_.closure(gens_);
      std::fill(in.begin(), in.end(), 0);
      for (auto s : span) in[s] = 1;
    }
  }

  // Extends generator images 0..level-1 along the Cayley graph; false on a
  // clash or a collision.
  bool consistent(std::size_t level) {
    const Index none = static_cast<Index>(-1);
    map_.assign(a_.order(), none);
    std::vector<char> used(b_.order(), 0);
    std::vector<Index> queue{a_.identity()};
    map_[a_.identity()] = b_.identity();
    used[b_.identity()] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const Index x = queue[i];
      for (std::size_t j = 0; j < level; ++j) {
        const Index y = a_.mul(x, gens_[j]);
        const Index z = b_.mul(map_[x], images_[j]);
        if (map_[y] == none) {
          if (used[z]) return false;
          used[z] = 1;
          map_[y] = z;
          queue.push_back(y);
        } else if (map_[y] != z) {
          return false;
        }
      }
    }
    return true;
  }

  bool search(std::size_t level) {
    if (++nodes_ > kIsoSearchBudget) throw CapExceeded("isomorphism search budget exhausted");
    if (level == gens_.size()) return consistent(level);
    for (Index c : candidates_[level]) {
      images_[level] = c;
      if (!consistent(level + 1)) continue;
      if (search(level + 1)) return true;
    }
    return false;
  }

  const SmallGroup& a_;
  const SmallGroup& b_;
  std::vector<ElementInvariant> inv_a_, inv_b_;
  std::vector<Index> gens_;
  std::vector<std::vector<Index>> candidates_;
  std::vector<Index> images_;
  std::vector<Index> map_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<std::vector<Index>> find_isomorphism(const SmallGroup& a, const SmallGroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.order() == 1) return std::vector<Index>{b.identity()};
  if (!(fingerprint(a) == fingerprint(b))) return std::nullopt;
  auto map = IsoSearch(a, b).run();
  if (map && !is_isomorphism(a, b, *map)) throw PropertyViolation("isomorphism search returned a non-isomorphism");
  return map;
}

IsoClassification iso_classes(const std::vector<SmallGroup>& groups, std::size_t cap) {
  IsoClassification out;
  out.class_of.resize(groups.size());
  out.witness.resize(groups.size());
  std::vector<IsoFingerprint> prints;
  prints.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.order() > cap) {
      throw CapExceeded("isomorphism classification needs orders <= " + std::to_string(cap) +
                        ", got " + std::to_string(g.order()));
    }
    prints.push_back(fingerprint(g));
  }
  std::map<IsoFingerprint, std::vector<std::size_t>> buckets;  // fingerprint -> class ids
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& classes = buckets[prints[i]];
    bool placed = false;
    for (std::size_t cls : classes) {
      const std::size_t rep = out.representatives[cls];
      std::optional<std::vector<Index>> map;
      if (groups[i].order() == 1) {
        map = std::vector<Index>{groups[rep].identity()};
      } else {
        map = IsoSearch(groups[i], groups[rep]).run();
      }
      if (map) {
        if (!is_isomorphism(groups[i], groups[rep], *map)) {
          throw PropertyViolation("isomorphism witness failed verification");
        }
        out.class_of[i] = cls;
        out.witness[i] = std::move(*map);
        placed = true;
        break;
      }
    }
    if (!placed) {
      const std::size_t cls = out.representatives.size();
      out.representatives.push_back(i);
      classes.push_back(cls);
      out.class_of[i] = cls;
      out.witness[i] = groups[i].all_elements();
    }
  }
  return out;
}

SigmaCounts sigma_counts(const SmallGroup& g, std::size_t subgroup_cap, std::size_t iso_cap) {
  const auto subs = all_subgroups(g, subgroup_cap);
  std::vector<SmallGroup> groups;
  groups.reserve(subs.size());
  for (const auto& s : subs) groups.push_back(g.induced(s));
  const auto classes = iso_classes(groups, iso_cap);
  SigmaCounts c;
  c.sigma = subs.size();
  c.sigma_iota = classes.class_count();
  if (c.sigma_iota > c.sigma) throw PropertyViolation("sigma_iota exceeds sigma");
  if (g.order() >= 2) {
    c.wall_log2 = wall_log_bound(g.order());
    if (std::log2(static_cast<double>(c.sigma)) > c.wall_log2 + 1e-9) {
      throw PropertyViolation("sigma exceeds n^{mu(n)+1}");
    }
  }
  return c;
}

SmallGroup relabel_group(const SmallGroup& g, const std::vector<SmallGroup::Index>& perm) {
  const std::size_t n = g.order();
  if (perm.size() != n) throw InvalidArgument("relabelling must be a permutation of the group");
  std::vector<SmallGroup::Index> t(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t[std::size_t{perm[i]} * n + perm[j]] =
          perm[g.mul(static_cast<SmallGroup::Index>(i), static_cast<SmallGroup::Index>(j))];
    }
  }
  return SmallGroup::from_table(std::move(t), n);
}

}  // namespace kinder
