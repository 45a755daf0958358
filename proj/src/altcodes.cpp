#include "kinder/altcodes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "kinder/errors.hpp"

namespace kinder {

namespace sym3 {
namespace {
using Perm = std::array<std::uint8_t, 3>;
constexpr std::array<Perm, 6> kPerms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}}};

std::uint8_t code_of(const Perm& p) {
  for (std::uint8_t i = 0; i < 6; ++i) {
    if (kPerms[i] == p) return i;
  }
  throw PropertyViolation("not a permutation of 3 letters");
}

struct Tables {
  std::array<std::array<std::uint8_t, 6>, 6> mul{};
  std::array<std::uint8_t, 6> inv{};
  Tables() {
    for (std::uint8_t a = 0; a < 6; ++a) {
      for (std::uint8_t b = 0; b < 6; ++b) {
        Perm c{};
        for (int x = 0; x < 3; ++x) c[x] = kPerms[b][kPerms[a][x]];
        mul[a][b] = code_of(c);
        if (mul[a][b] == 0) inv[a] = b;
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}
}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) { return tables().mul[a][b]; }
std::uint8_t inv(std::uint8_t a) { return tables().inv[a]; }
}  // namespace sym3

GammaK::GammaK(std::size_t k, std::uint64_t cap) : k_(k), order_(1) {
  for (std::size_t i = 0; i < k; ++i) {
    order_ *= 6;
    if (order_ > cap) throw CapExceeded("6^" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  }
}

GammaK::Word GammaK::decode(std::uint64_t index) const {
  Word w(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    w[i] = static_cast<std::uint8_t>(index % 6);
    index /= 6;
  }
  return w;
}

std::uint64_t GammaK::encode(const Word& w) const {
  std::uint64_t idx = 0;
  for (std::size_t i = k_; i-- > 0;) idx = idx * 6 + w[i];
  return idx;
}

GammaK::Word GammaK::mul(const Word& a, const Word& b) const {
  Word c(k_);
  for (std::size_t i = 0; i < k_; ++i) c[i] = sym3::mul(a[i], b[i]);
  return c;
}

GammaK::Word GammaK::inv(const Word& a) const {
  Word c(k_);
  for (std::size_t i = 0; i < k_; ++i) c[i] = sym3::inv(a[i]);
  return c;
}

GammaK::Word GammaK::commutator(const Word& a, const Word& b) const {
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

std::vector<Elem> GammaK::sign(const Word& w) const {
  std::vector<Elem> s(k_);
  for (std::size_t i = 0; i < k_; ++i) s[i] = sym3::sign(w[i]) ? 1 : 0;
  return s;
}

bool GammaK::in_gamma2(const Word& w) const {
  return std::none_of(w.begin(), w.end(), [](std::uint8_t x) { return sym3::sign(x); });
}

std::size_t GammaK::weight(const Word& w) const {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](std::uint8_t x) { return sym3::sign(x); }));
}

CodeSubgroup subgroup_from_code(const GammaK& G, const Subspace& C) {
  if (C.ambient_dim() != G.k() || C.field()->order() != 2) {
    throw InvalidArgument("code must be a subspace of F_2^" + std::to_string(G.k()));
  }
  CodeSubgroup out;
  std::map<std::uint64_t, SmallGroup::Index> index;
  for (std::uint64_t i = 0; i < G.order(); ++i) {
    GammaK::Word w = G.decode(i);
    const auto s = G.sign(w);
    if (C.contains(std::span<const Elem>(s.data(), s.size()))) {
      index.emplace(i, static_cast<SmallGroup::Index>(out.labels.size()));
      out.labels.push_back(std::move(w));
    }
  }
  const std::size_t n = out.labels.size();
  std::vector<SmallGroup::Index> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      table[a * n + b] = index.at(G.encode(G.mul(out.labels[a], out.labels[b])));
    }
  }
  out.group = SmallGroup::from_table(std::move(table), n);
  return out;
}

std::size_t hamming_recover(const SmallGroup& H, SmallGroup::Index h) {
  if (h >= H.order()) throw InvalidArgument("element is not in H");
  std::vector<SmallGroup::Index> comms;
  for (SmallGroup::Index g = 0; g < H.order(); ++g) {
    if (H.pow(g, 3) == H.identity()) comms.push_back(H.commutator(h, g));
  }
  std::size_t size = H.closure(comms).size();
  std::size_t w = 0;
  while (size % 3 == 0) {
    size /= 3;
    ++w;
  }
  if (size != 1) throw PropertyViolation("commutator subgroup order is not a power of 3");
  return w;
}

namespace {

std::vector<Elem> rref_key(const Subspace& C) { return C.basis().entries(); }

Subspace permuted(const Subspace& C, const std::vector<std::size_t>& perm) {
  Matrix g(C.field(), C.dim(), C.ambient_dim());
  for (std::size_t i = 0; i < C.dim(); ++i) {
    for (std::size_t j = 0; j < C.ambient_dim(); ++j) g.at(i, perm[j]) = C.basis().at(i, j);
  }
  return Subspace(g);
}

}  // namespace

Subspace canonical_code(const Subspace& C) {
  std::vector<std::size_t> perm(C.ambient_dim());
  std::iota(perm.begin(), perm.end(), 0);
  Subspace best = C;
  auto best_key = rref_key(C);
  do {
    Subspace cand = permuted(C, perm);
    auto key = rref_key(cand);
    if (key < best_key) {
      best_key = std::move(key);
      best = std::move(cand);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

CodeClassReport code_classes(std::size_t k, std::size_t l, std::uint64_t cap) {
  if (l > k) throw InvalidArgument("code dimension exceeds length");
  const FieldPtr F2 = Field::make(2, 1);
  CodeClassReport rep;
  rep.k = k;
  rep.l = l;
  rep.all_codes = enumerate_subspaces(F2, k, l, cap);
  rep.codes = rep.all_codes.size();
  std::map<std::vector<Elem>, std::size_t> classes;
  std::vector<Subspace> canon;
  std::vector<std::vector<Elem>> keys;
  for (const auto& C : rep.all_codes) {
    const Subspace c = canonical_code(C);
    keys.push_back(rref_key(c));
    if (classes.emplace(keys.back(), 0).second) canon.push_back(c);
  }
  // Class ids follow the sorted order of canonical forms.
  std::size_t id = 0;
  for (auto& [key, cls] : classes) cls = id++;
  rep.classes = classes.size();
  rep.canonical.resize(rep.classes);
  for (const auto& c : canon) rep.canonical[classes.at(rref_key(c))] = c;
  for (const auto& key : keys) rep.class_of.push_back(classes.at(key));
  double fact = 1.0;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  rep.bound = std::pow(2.0, static_cast<double>(l * (k - l))) / fact;
  rep.bound_ceil = static_cast<std::uint64_t>(std::ceil(rep.bound - 1e-12));
  return rep;
}

}  // namespace kinder
