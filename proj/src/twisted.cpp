#include "kinder/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "json.hpp"

#include "kinder/errors.hpp"
#include "kinder/parallel.hpp"

namespace kinder {

B2Group::B2Group(FieldPtr F) : F_(std::move(F)) {
  if (F_->characteristic() != 2) throw InvalidArgument("B2 group needs characteristic 2");
}

std::uint64_t B2Group::order() const {
  const std::uint64_t q = F_->order();
  return q * q * q * q;
}

B2Elem B2Group::mul(const B2Elem& a, const B2Elem& b) const {
  const Field& f = *F_;
  const Elem rs = f.mul(b.r, a.s);
  return {f.add(a.r, b.r), f.add(a.s, b.s), f.add(f.add(a.z1, b.z1), rs),
          f.add(f.add(a.z2, b.z2), f.mul(rs, a.s))};
}

B2Elem B2Group::inv(const B2Elem& a) const {
  // (r,s,z)^{-1} = (r, s, z + c((r,s),(r,s))) since x + x = 0.
  const Field& f = *F_;
  const Elem rs = f.mul(a.r, a.s);
  return {a.r, a.s, f.add(a.z1, rs), f.add(a.z2, f.mul(rs, a.s))};
}

B2Elem B2Group::commutator(const B2Elem& a, const B2Elem& b) const {
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

std::pair<Elem, Elem> B2Group::phi(Elem r, Elem s) const {
  const Field& f = *F_;
  const Elem rs = f.mul(r, s);
  return {rs, f.mul(rs, s)};
}

std::pair<Elem, Elem> B2Group::bimap(const B2Elem& a, const B2Elem& b) const {
  const Field& f = *F_;
  const Elem x = f.mul(a.r, b.s), y = f.mul(b.r, a.s);
  return {f.add(x, y), f.add(f.mul(x, b.s), f.mul(y, a.s))};
}

B2Elem B2Group::decode(std::uint64_t index) const {
  const std::uint64_t q = F_->order();
  B2Elem g;
  g.r = static_cast<Elem>(index % q);
  index /= q;
  g.s = static_cast<Elem>(index % q);
  index /= q;
  g.z1 = static_cast<Elem>(index % q);
  g.z2 = static_cast<Elem>(index / q);
  return g;
}

std::uint64_t B2Group::encode(const B2Elem& g) const {
  const std::uint64_t q = F_->order();
  return g.r + q * (g.s + q * (g.z1 + q * std::uint64_t{g.z2}));
}

std::optional<std::string> B2Group::verify_axioms() const {
  const Field& f = *F_;
  const std::uint64_t q = f.order();
  const std::uint64_t n = order();
  for (std::uint64_t i = 0; i < n; ++i) {
    const B2Elem g = decode(i);
    if (mul(g, identity()) != g || mul(identity(), g) != g) return "identity fails";
    if (mul(g, inv(g)) != identity() || mul(inv(g), g) != identity()) return "inverse fails";
  }
  // c(a,b) + c(a+b,c) = c(b,c) + c(a,b+c) with c((r,s),(r',s')) = (r's, r's^2).
  auto c = [&](Elem r, Elem s, Elem r2, Elem s2) {
    (void)r;
    (void)s2;
    const Elem x = f.mul(r2, s);
    return std::pair<Elem, Elem>{x, f.mul(x, s)};
  };
  const std::uint64_t q2 = q * q;
  for (std::uint64_t a = 0; a < q2; ++a) {
    const Elem ar = static_cast<Elem>(a % q), as = static_cast<Elem>(a / q);
    for (std::uint64_t b = 0; b < q2; ++b) {
      const Elem br = static_cast<Elem>(b % q), bs = static_cast<Elem>(b / q);
      for (std::uint64_t d = 0; d < q2; ++d) {
        const Elem dr = static_cast<Elem>(d % q), ds = static_cast<Elem>(d / q);
        const auto l1 = c(ar, as, br, bs);
        const auto l2 = c(f.add(ar, br), f.add(as, bs), dr, ds);
        const auto r1 = c(br, bs, dr, ds);
        const auto r2 = c(ar, as, f.add(br, dr), f.add(bs, ds));
        if (f.add(l1.first, l2.first) != f.add(r1.first, r2.first) ||
            f.add(l1.second, l2.second) != f.add(r1.second, r2.second)) {
          return "cocycle identity fails";
        }
      }
    }
  }
  if (q <= 4) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const B2Elem a = decode(i);
      for (std::uint64_t j = 0; j < n; ++j) {
        const B2Elem ab = mul(a, decode(j));
        for (std::uint64_t k = 0; k < n; ++k) {
          const B2Elem c3 = decode(k);
          if (mul(ab, c3) != mul(a, mul(decode(j), c3))) return "associativity fails";
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<B2Elem> B2Group::center() const {
  std::vector<B2Elem> z;
  const std::uint64_t n = order();
  const std::uint64_t q2 = F_->order() * F_->order();
  for (std::uint64_t i = 0; i < n; ++i) {
    const B2Elem g = decode(i);
    bool central = true;
    // Central parts never matter, so test against (r,s) representatives.
    for (std::uint64_t j = 0; j < q2 && central; ++j) {
      const B2Elem h = decode(j);
      central = mul(g, h) == mul(h, g);
    }
    if (central) z.push_back(g);
  }
  return z;
}

namespace {

Elem omega_of(const Field& f) { return f.primitive(); }

Elem omega_pow(const Field& f, long k) { return f.pow(omega_of(f), k); }

std::vector<Elem> subspace_elements(const Field& f, const Subspace& V) {
  const std::size_t d = V.dim();
  std::vector<Elem> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<std::uint32_t> v(f.degree(), 0);
    for (std::size_t i = 0; i < d; ++i) {
      if ((mask >> i) & 1u) {
        for (std::size_t j = 0; j < v.size(); ++j) v[j] ^= V.basis().at(i, j);
      }
    }
    out.push_back(f.from_vector(v));
  }
  return out;
}

bool in_subspace(const Field& f, const Subspace& V, Elem s) {
  const auto v = f.to_vector(s);
  return V.contains(std::span<const Elem>(v.data(), v.size()));
}

// Labels on an elementary abelian 2-group spanned by labelled generators;
// throws if the labelling is not additive.
std::map<B2Elem, Elem> extend_labels(const B2Group& U,
                                     const std::vector<std::pair<B2Elem, Elem>>& gens) {
  const Field& f = *U.field();
  std::map<B2Elem, Elem> label{{U.identity(), 0}};
  std::deque<B2Elem> queue{U.identity()};
  while (!queue.empty()) {
    const B2Elem x = queue.front();
    queue.pop_front();
    for (const auto& [g, l] : gens) {
      const B2Elem y = U.mul(x, g);
      const Elem ly = f.add(label.at(x), l);
      auto [it, fresh] = label.emplace(y, ly);
      if (fresh) {
        queue.push_back(y);
      } else if (it->second != ly) {
        throw PropertyViolation("labels are not additive on the generated subgroup");
      }
    }
  }
  return label;
}

}  // namespace

B2LabelInput random_b2_input(const B2Group& U, const Subspace& V, std::mt19937_64& rng) {
  const Field& f = *U.field();
  B2LabelInput in{V, {}, {}};
  auto rnd = [&] { return static_cast<Elem>(rng() % f.order()); };
  for (int i = -1; i <= 1; ++i) {
    const Elem w = omega_pow(f, i);
    in.A[i + 1] = {w, 0, rnd(), rnd()};
    in.B[i + 1] = {0, w, rnd(), rnd()};
  }
  return in;
}

B2Labels b2_labels(const B2Group& U, const B2LabelInput& in) {
  const Field& f = *U.field();
  const std::size_t n = f.degree();
  if (in.V.ambient_dim() != n || in.V.field()->order() != 2) {
    throw InvalidArgument("V must be an F_2-subspace of F");
  }
  for (int i = -1; i <= 1; ++i) {
    const Elem w = omega_pow(f, i);
    if (!in_subspace(f, in.V, w)) throw InvalidArgument("V must contain w^-1, 1 and w");
    const B2Elem& a = in.A[i + 1];
    const B2Elem& b = in.B[i + 1];
    if (a.r != w || a.s != 0) throw InvalidArgument("A_i must lie over (w^i, 0)");
    if (b.r != 0 || b.s != w) throw InvalidArgument("B_i must lie over (0, w^i)");
  }
  const B2Elem& Bm = in.B[0];
  const B2Elem& B0 = in.B[1];
  const B2Elem& B1 = in.B[2];

  B2Labels out;
  // out.A[k + 1] = A_k
  out.A.assign(in.A.begin(), in.A.end());
  for (std::size_t k = 1; k < n; ++k) {
    const B2Elem Ak = out.A[k + 1], Ak1 = out.A[k], Ak2 = out.A[k - 1];
    // [A_{k+1}, B_-1] = [A_{k-2}, B_1][A_{k-1}, B_0][A_k, B_0]^{-1}
    const B2Elem target = U.mul(U.mul(U.commutator(Ak2, B1), U.commutator(Ak1, B0)),
                                U.inv(U.commutator(Ak, B0)));
    std::optional<B2Elem> found;
    for (Elem r = 0; r < f.order(); ++r) {
      const B2Elem cand{r, 0, 0, 0};
      if (U.commutator(cand, Bm) == target) {
        if (found) throw PropertyViolation("recurrence solution is not unique modulo Gamma_3");
        found = cand;
      }
    }
    if (!found) throw PropertyViolation("recurrence has no solution in Q");
    out.A.push_back(*found);
  }
  auto A = [&](long k) { return out.A.at(static_cast<std::size_t>(k + 1)); };

  std::vector<std::pair<B2Elem, Elem>> g4, gc, gq;
  for (long k = 0; k < static_cast<long>(n); ++k) {
    const B2Elem c = U.mul(U.commutator(A(k + 1), Bm), U.commutator(A(k), B0));
    g4.emplace_back(c, f.add(omega_pow(f, k), omega_pow(f, k - 1)));
    gc.emplace_back(U.mul(U.commutator(A(k + 1), Bm), U.commutator(A(k - 1), B0)), 0);
    gq.emplace_back(U.commutator(A(k), B0), omega_pow(f, k));
  }
  out.gamma4_label = extend_labels(U, g4);
  for (const auto& [g, l] : out.gamma4_label) out.gamma4.push_back(g);
  for (const auto& [g, l] : extend_labels(U, gc)) out.complement.push_back(g);
  auto qgens = gq;
  for (const auto& [g, l] : g4) qgens.emplace_back(g, 0);
  out.quotient_label = extend_labels(U, qgens);

  std::set<Elem> image;
  const B2Elem A0 = A(0);
  for (Elem r = 0; r < f.order(); ++r) {
    for (Elem s : subspace_elements(f, in.V)) {
      const B2Elem c = U.commutator(B2Elem{r, s, 0, 0}, A0);
      auto it = out.quotient_label.find(c);
      if (it == out.quotient_label.end()) throw PropertyViolation("[Q, A_0] leaves the labelled center");
      image.insert(it->second);
    }
  }
  out.recovered_subspace.assign(image.begin(), image.end());
  return out;
}

BinaryField::Elem suzuki_form(const BinaryField& F, const BinaryField::Elem& x,
                              const BinaryField::Elem& y) {
  if (F.degree() % 2 == 0) throw InvalidArgument("Suzuki form needs odd degree 2e+1");
  const std::uint64_t k = (F.degree() - 1) / 2 + 1;
  return F.add(F.mul(x, F.pow2k(y, k)), F.mul(y, F.pow2k(x, k)));
}

std::size_t suzuki_size_bound(std::uint32_t e) {
  const std::uint64_t n = 2 * std::uint64_t{e} + 1;
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return static_cast<std::size_t>(3 * r);
}

namespace {

constexpr const char* kCertFormat = "kinder-suzuki-span";
constexpr int kCertVersion = 1;

// Echelon basis of F_2^n keyed by leading bit.
class Echelon {
 public:
  explicit Echelon(std::size_t n) : rows_(n) {}
  std::size_t rank() const { return rank_; }
  BitPoly reduce(BitPoly v) const {
    for (long d = v.degree(); d >= 0; d = v.degree()) {
      const auto& row = rows_[static_cast<std::size_t>(d)];
      if (!row) break;
      v ^= *row;
    }
    return v;
  }
  // True if v was independent (and is now included).
  bool insert(const BitPoly& v) {
    BitPoly r = reduce(v);
    const long d = r.degree();
    if (d < 0) return false;
    rows_[static_cast<std::size_t>(d)] = std::move(r);
    ++rank_;
    return true;
  }

 private:
  std::vector<std::optional<BitPoly>> rows_;
  std::size_t rank_ = 0;
};

struct Attempt {
  bool found = false;
  std::size_t rank = 0;
  std::vector<BinaryField::Elem> S;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

Attempt greedy_attempt(const BinaryField& F, std::size_t bound, std::size_t candidates,
                       std::mt19937_64 rng) {
  const std::size_t n = F.degree();
  Attempt a;
  Echelon ech(n);
  auto random_nonzero = [&] {
    for (;;) {
      auto x = F.random(rng);
      if (!x.is_zero()) return x;
    }
  };
  a.S.push_back(random_nonzero());
  while (ech.rank() < n && a.S.size() < bound) {
    std::size_t best_gain = 0;
    BinaryField::Elem best;
    for (std::size_t c = 0; c < std::max<std::size_t>(candidates, 1); ++c) {
      const auto x = random_nonzero();
      Echelon local = ech;
      std::size_t gain = 0;
      for (const auto& s : a.S) gain += local.insert(suzuki_form(F, x, s)) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = x;
      }
    }
    if (best_gain == 0) break;  // plateau
    const std::size_t idx = a.S.size();
    for (std::size_t j = 0; j < a.S.size(); ++j) {
      if (ech.insert(suzuki_form(F, best, a.S[j]))) a.pairs.emplace_back(idx, j);
    }
    a.S.push_back(best);
  }
  a.rank = ech.rank();
  a.found = a.rank == n;
  return a;
}

}  // namespace

std::string SpanCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = kCertFormat;
  j["version"] = kCertVersion;
  j["e"] = e;
  j["degree"] = 2 * e + 1;
  j["modulus"] = modulus;
  j["size_bound"] = suzuki_size_bound(e);
  j["rounding"] = "ceil";
  j["S"] = S;
  nlohmann::ordered_json p = nlohmann::ordered_json::array();
  for (const auto& [x, y] : pairs) p.push_back({x, y});
  j["pairs"] = p;
  return j.dump(2);
}

SpanCertificate SpanCertificate::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw MalformedInput(std::string("certificate is not JSON: ") + ex.what());
  }
  try {
    if (!j.is_object() || j.at("format") != kCertFormat) throw MalformedInput("unknown certificate format");
    if (j.at("version") != kCertVersion) throw MalformedInput("unsupported certificate version");
    SpanCertificate c;
    c.e = j.at("e").get<std::uint32_t>();
    if (j.at("degree").get<std::uint64_t>() != 2 * std::uint64_t{c.e} + 1) {
      throw MalformedInput("degree is not 2e+1");
    }
    if (j.contains("rounding") && j.at("rounding") != "ceil") throw MalformedInput("unknown rounding");
    c.modulus = j.at("modulus").get<Poly>();
    c.S = j.at("S").get<std::vector<std::string>>();
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw MalformedInput("pairs must be index pairs");
      c.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw MalformedInput(std::string("certificate fields are malformed: ") + ex.what());
  }
}

SearchResult suzuki_search(std::uint32_t e, std::uint64_t seed, const SearchOptions& opts) {
  if (e == 0) throw InvalidArgument("Suzuki search needs e >= 1 (the form vanishes on F_2)");
  const auto F = BinaryField::make(2 * e + 1);
  const std::size_t bound = suzuki_size_bound(e);
  const unsigned workers = resolve_workers(opts.workers);
  SearchResult res;
  for (std::size_t start = 0; start < opts.max_restarts; start += workers) {
    const std::size_t batch = std::min<std::size_t>(workers, opts.max_restarts - start);
    std::vector<Attempt> attempts(batch);
    parallel_for(batch, workers, [&](std::uint64_t i) {
      attempts[i] = greedy_attempt(*F, bound, opts.candidates, task_rng(seed, start + i));
    });
    for (std::size_t i = 0; i < batch; ++i) {
      res.restarts = start + i + 1;
      res.best_rank = std::max(res.best_rank, attempts[i].rank);
      if (!attempts[i].found) continue;
      SpanCertificate c;
      c.e = e;
      c.modulus = F->modulus_coeffs();
      for (const auto& s : attempts[i].S) c.S.push_back(F->to_hex(s));
      c.pairs = attempts[i].pairs;
      res.found = true;
      res.set_size = attempts[i].S.size();
      res.certificate = std::move(c);
      return res;
    }
  }
  return res;
}

bool suzuki_verify(const SpanCertificate& cert) {
  const std::uint64_t n64 = 2 * std::uint64_t{cert.e} + 1;
  if (cert.e == 0 || n64 > (1u << 20)) throw MalformedInput("e out of range");
  const auto n = static_cast<std::uint32_t>(n64);
  if (cert.modulus.size() != n + 1 || cert.modulus.back() != 1) {
    throw MalformedInput("modulus must be monic of degree 2e+1");
  }
  for (auto c : cert.modulus) {
    if (c > 1) throw MalformedInput("modulus coefficients must be bits");
  }
  for (const auto& [x, y] : cert.pairs) {
    if (x >= cert.S.size() || y >= cert.S.size()) throw MalformedInput("pair index out of range");
  }
  if (!is_irreducible_gf2(BitPoly::from_coeffs(cert.modulus))) return false;
  const auto F = BinaryField::make(n, cert.modulus);
  std::vector<BinaryField::Elem> S;
  for (const auto& h : cert.S) S.push_back(F->from_hex(h));
  if (S.size() > suzuki_size_bound(cert.e)) return false;
  if (cert.pairs.size() != n) return false;
  Echelon ech(n);
  for (const auto& [x, y] : cert.pairs) ech.insert(suzuki_form(*F, S[x], S[y]));
  return ech.rank() == n;
}

bool suzuki_verify_json(const std::string& text) { return suzuki_verify(SpanCertificate::from_json(text)); }

}  // namespace kinder
