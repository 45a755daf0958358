#include "kinder/nursery.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kinder/arith.hpp"
#include "kinder/errors.hpp"
#include "kinder/parallel.hpp"

namespace kinder {

namespace {

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

Vec mat_vec(const Matrix& A, const Vec& v) {
  const Field& f = A.F();
  Vec out(A.rows(), 0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Elem acc = 0;
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (v[j]) acc = f.add(acc, f.mul(A.at(i, j), v[j]));
    }
    out[i] = acc;
  }
  return out;
}

Vec vec_add(const Field& f, const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
  return r;
}

Vec vec_neg(const Field& f, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.neg(a[i]);
  return r;
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
}

// Matrix over F_p of an F_p-linear map F_{p^n} -> F_{p^n} in the power basis.
template <class Op>
Matrix linear_map_matrix(const Field& F, const FieldPtr& Fp, Op op) {
  const std::size_t n = F.degree();
  Matrix M(Fp, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::uint32_t> uv(n, 0);
    uv[j] = 1;
    const auto col = F.to_vector(op(F.from_vector(uv)));
    for (std::size_t i = 0; i < n; ++i) M.at(i, j) = col[i];
  }
  return M;
}

// Coordinates of a field element in a subspace given by its RREF basis.
Vec coords_in(const Subspace& sub, const Field& F, Elem y) {
  const auto v = F.to_vector(y);
  if (!sub.contains(std::span<const Elem>(v.data(), v.size()))) {
    throw PropertyViolation("element outside the expected subspace");
  }
  Vec c(sub.dim());
  for (std::size_t i = 0; i < sub.dim(); ++i) c[i] = v[sub.pivots()[i]];
  return c;
}

Elem element_of(const Subspace& sub, const Field& F, std::size_t i) {
  const auto row = sub.basis().row(i);
  return F.from_vector(std::vector<std::uint32_t>(row.begin(), row.end()));
}

// Nursery with R = M = F (a field) and bracket (x,u) -> scale * x u.
NurseryPtr field_nursery(std::string name, const FieldPtr& F, Elem scale) {
  const FieldPtr Fp = prime_field_of(*F);
  const std::size_t n = F->degree();
  std::vector<Matrix> bracket, ring;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> uv(n, 0);
    uv[i] = 1;
    const Elem bi = F->from_vector(uv);
    ring.push_back(linear_map_matrix(*F, Fp, [&](Elem y) { return F->mul(bi, y); }));
    bracket.push_back(linear_map_matrix(*F, Fp, [&](Elem y) { return F->mul(scale, F->mul(bi, y)); }));
  }
  std::vector<Vec> S;
  const auto one = F->to_vector(F->one());
  S.emplace_back(one.begin(), one.end());
  if (n > 1) {
    const auto w = F->to_vector(F->generator());
    S.emplace_back(w.begin(), w.end());
  }
  std::vector<Vec> T{Vec(one.begin(), one.end())};
  return ModuleNursery::from_parts(std::move(name), Fp, std::move(bracket), std::move(ring),
                                   std::move(S), std::move(T));
}

}  // namespace

NurseryPtr ModuleNursery::from_parts(std::string name, FieldPtr Fp, std::vector<Matrix> bracket,
                                     std::vector<Matrix> ring, std::vector<Vec> S,
                                     std::vector<Vec> T) {
  if (Fp->degree() != 1) throw InvalidArgument("nursery coordinates must be over a prime field");
  if (bracket.empty()) throw InvalidArgument("nursery ring must be nonzero");
  if (ring.size() != bracket.size()) throw InvalidArgument("ring and bracket bases differ in size");
  const std::size_t m = bracket.front().rows();
  for (const auto& B : bracket) {
    if (B.rows() != m || B.cols() != m) throw InvalidArgument("bracket matrices must be m x m");
  }
  for (const auto& s : S) {
    if (s.size() != bracket.size()) throw InvalidArgument("S element has the wrong length");
  }
  for (const auto& t : T) {
    if (t.size() != m) throw InvalidArgument("T element has the wrong length");
  }
  auto n = std::shared_ptr<ModuleNursery>(new ModuleNursery());
  n->name_ = std::move(name);
  n->Fp_ = std::move(Fp);
  n->m_ = m;
  n->bracket_ = std::move(bracket);
  n->ring_ = std::move(ring);
  n->S_ = std::move(S);
  n->T_ = std::move(T);
  return n;
}

NurseryPtr ModuleNursery::matrix(std::size_t a, std::size_t c, const FieldPtr& K) {
  if (a == 0 || c == 0) throw InvalidArgument("matrix nursery needs a, c >= 1");
  const FieldPtr Fp = prime_field_of(*K);
  const std::size_t e = K->degree();
  auto basis_matrix = [&](std::size_t rows, std::size_t cols, std::size_t idx) {
    Matrix M(K, rows, cols);
    std::vector<std::uint32_t> v(e, 0);
    v[idx % e] = 1;
    M.at((idx / e) / cols, (idx / e) % cols) = K->from_vector(v);
    return M;
  };
  const std::size_t r = a * a * e;
  const std::size_t m = a * c * e;
  std::vector<Matrix> bracket;
  for (std::size_t i = 0; i < r; ++i) {
    const Matrix Ri = basis_matrix(a, a, i);
    Matrix B(Fp, m, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto col = flatten_to_prime(Ri * basis_matrix(a, c, j));
      for (std::size_t k = 0; k < m; ++k) B.at(k, j) = col[k];
    }
    bracket.push_back(std::move(B));
  }
  const Elem omega = e > 1 ? K->generator() : K->one();
  Matrix I = Matrix::identity(K, a);
  Matrix wE(K, a, a);
  wE.at(0, 0) = omega;
  Matrix P(K, a, a);
  for (std::size_t i = 0; i < a; ++i) P.at(i, (i + 1) % a) = 1;
  std::vector<Vec> S;
  for (const Matrix& X : {I, wE, P}) {
    Vec v = flatten_to_prime(X);
    if (std::find(S.begin(), S.end(), v) == S.end()) S.push_back(std::move(v));
  }
  std::vector<Vec> T;
  for (std::size_t i = 0; i < a * c; ++i) {
    Matrix E(K, a, c);
    E.at(i / c, i % c) = 1;
    T.push_back(flatten_to_prime(E));
  }
  auto ring = bracket;
  return from_parts("matrix(a=" + std::to_string(a) + ",c=" + std::to_string(c) + "," +
                        K->describe() + ")",
                    Fp, std::move(bracket), std::move(ring), std::move(S), std::move(T));
}

NurseryPtr ModuleNursery::unitary(std::uint32_t p, std::uint32_t e) {
  if (e == 0) throw InvalidArgument("unitary nursery needs e >= 1");
  const FieldPtr F = Field::make(p, 2 * e);
  const FieldPtr Fp = prime_field_of(*F);
  const Field& f = *F;
  const Matrix sigma = linear_map_matrix(f, Fp, [&](Elem y) { return f.frobenius(y, e); });
  const Matrix id = Matrix::identity(Fp, 2 * e);
  const Subspace Rsub(nullspace_basis(sigma - id));
  const Subspace Msub(nullspace_basis(sigma + id));
  if (Rsub.dim() != e || Msub.dim() != e) throw PropertyViolation("unexpected fixed-space dimensions");

  std::vector<Matrix> bracket;
  for (std::size_t i = 0; i < Rsub.dim(); ++i) {
    const Elem ri = element_of(Rsub, f, i);
    Matrix B(Fp, e, e);
    for (std::size_t j = 0; j < Msub.dim(); ++j) {
      const auto col = coords_in(Msub, f, f.mul(ri, element_of(Msub, f, j)));
      for (std::size_t k = 0; k < e; ++k) B.at(k, j) = col[k];
    }
    bracket.push_back(std::move(B));
  }
  std::uint64_t pe = 1;
  for (std::uint32_t i = 0; i < e; ++i) pe *= p;
  const Elem omega = f.pow(f.primitive(), static_cast<std::int64_t>(pe + 1));
  std::vector<Vec> S{coords_in(Rsub, f, f.one())};
  Vec w = coords_in(Rsub, f, omega);
  if (w != S.front()) S.push_back(std::move(w));
  std::vector<Vec> T;
  for (Elem y = 1; y < f.order(); ++y) {
    if (f.frobenius(y, e) == f.neg(y)) {
      T.push_back(coords_in(Msub, f, y));
      break;
    }
  }
  auto ring = bracket;
  return from_parts("unitary(p=" + std::to_string(p) + ",e=" + std::to_string(e) + ")", Fp,
                    std::move(bracket), std::move(ring), std::move(S), std::move(T));
}

NurseryPtr ModuleNursery::b2_odd(std::uint32_t p, std::uint32_t e) {
  if (p == 2) throw InvalidArgument("b2_odd needs odd characteristic");
  const FieldPtr F = Field::make(p, e);
  return field_nursery("b2_odd(p=" + std::to_string(p) + ",e=" + std::to_string(e) + ")", F,
                       F->from_int(2));
}

NurseryPtr ModuleNursery::ree_small(std::uint32_t e) {
  const FieldPtr F = Field::make(3, 2 * e + 1);
  return field_nursery("ree_small(e=" + std::to_string(e) + ")", F, F->one());
}

Subspace ModuleNursery::span_S() const {
  Matrix m(Fp_, S_.size(), r());
  for (std::size_t i = 0; i < S_.size(); ++i) {
    for (std::size_t j = 0; j < r(); ++j) m.at(i, j) = S_[i][j];
  }
  return Subspace(m);
}

Vec ModuleNursery::bracket(const Vec& x, const Vec& u) const {
  const Field& f = *Fp_;
  Vec out(m_, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    const Matrix& B = bracket_[i];
    for (std::size_t k = 0; k < m_; ++k) {
      Elem acc = 0;
      for (std::size_t j = 0; j < m_; ++j) {
        if (u[j]) acc = f.add(acc, f.mul(B.at(k, j), u[j]));
      }
      out[k] = f.add(out[k], f.mul(x[i], acc));
    }
  }
  return out;
}

Triple ModuleNursery::identity() const { return {Vec(r(), 0), Vec(m_, 0), Vec(m_, 0)}; }

Triple ModuleNursery::mul(const Triple& a, const Triple& b) const {
  const Field& f = *Fp_;
  return {vec_add(f, a.x, b.x), vec_add(f, a.u, b.u),
          vec_add(f, vec_add(f, a.w, b.w), bracket(a.x, b.u))};
}

Triple ModuleNursery::inv(const Triple& a) const {
  // (x,u,w)^{-1} = (-x, -u, -w + x.u)
  const Field& f = *Fp_;
  return {vec_neg(f, a.x), vec_neg(f, a.u), vec_add(f, vec_neg(f, a.w), bracket(a.x, a.u))};
}

Triple ModuleNursery::commutator(const Triple& a, const Triple& b) const {
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

std::optional<std::string> ModuleNursery::check_generation() const {
  if (S_.empty()) return "S is empty";
  const std::size_t n = ring_.front().rows();
  auto ring_image = [&](const Vec& x) {
    Matrix acc(Fp_, n, n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i]) acc = acc + ring_[i].scaled(x[i]);
    }
    return acc;
  };
  if (!(ring_image(S_.front()) == Matrix::identity(Fp_, n))) return "first element of S is not 1";
  auto flat = [](const Matrix& M) { return M.entries(); };
  std::vector<Matrix> basis;
  Matrix rows(Fp_, 0, n * n);
  auto try_add = [&](const Matrix& M) {
    Matrix cand(Fp_, rows.rows() + 1, n * n);
    cand.set_block(0, 0, rows);
    const auto v = flat(M);
    for (std::size_t j = 0; j < v.size(); ++j) cand.at(rows.rows(), j) = v[j];
    if (rank(cand) > rows.rows()) {
      rows = cand;
      basis.push_back(M);
      return true;
    }
    return false;
  };
  for (const auto& s : S_) try_add(ring_image(s));
  bool grew = true;
  while (grew) {
    grew = false;
    const auto current = basis;
    for (const auto& A : current) {
      for (const auto& B : current) {
        if (try_add(A * B)) grew = true;
      }
    }
  }
  if (basis.size() != r()) {
    return "S generates a subalgebra of dimension " + std::to_string(basis.size()) + ", not " +
           std::to_string(r());
  }
  return std::nullopt;
}

std::optional<std::string> ModuleNursery::check_annihilator() const {
  // x -> (x.t)_{t in T} must be injective on R.
  Matrix map(Fp_, m_ * T_.size(), r());
  for (std::size_t i = 0; i < r(); ++i) {
    for (std::size_t k = 0; k < T_.size(); ++k) {
      const Vec col = mat_vec(bracket_[i], T_[k]);
      for (std::size_t j = 0; j < m_; ++j) map.at(k * m_ + j, i) = col[j];
    }
  }
  const std::size_t rk = rank(map);
  if (rk != r()) {
    return "common annihilator of T has dimension " + std::to_string(r() - rk);
  }
  return std::nullopt;
}

std::optional<std::string> ModuleNursery::check_filtration(std::size_t exhaustive_log2_cap) const {
  const double log2_order = static_cast<double>(log_order()) * std::log2(static_cast<double>(p()));
  std::vector<Triple> elems;
  if (log2_order <= static_cast<double>(exhaustive_log2_cap)) {
    const std::size_t n = log_order();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= p();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Vec digits(n);
      std::uint64_t k = idx;
      for (std::size_t i = 0; i < n; ++i) {
        digits[i] = static_cast<Elem>(k % p());
        k /= p();
      }
      elems.push_back({Vec(digits.begin(), digits.begin() + r()),
                       Vec(digits.begin() + r(), digits.begin() + r() + m_),
                       Vec(digits.begin() + r() + m_, digits.end())});
    }
  } else {
    // Biadditivity makes basis elements plus random sums enough.
    elems.push_back(identity());
    for (std::size_t i = 0; i < r(); ++i) elems.push_back({unit_vec(r(), i), Vec(m_, 0), Vec(m_, 0)});
    for (std::size_t i = 0; i < m_; ++i) elems.push_back({Vec(r(), 0), unit_vec(m_, i), Vec(m_, 0)});
    for (std::size_t i = 0; i < m_; ++i) elems.push_back({Vec(r(), 0), Vec(m_, 0), unit_vec(m_, i)});
    auto rng = task_rng(0x6e75727365ULL, 0);
    for (int k = 0; k < 32; ++k) {
      Triple t{Vec(r()), Vec(m_), Vec(m_)};
      for (auto* v : {&t.x, &t.u, &t.w}) {
        for (auto& c : *v) c = static_cast<Elem>(rng() % p());
      }
      elems.push_back(std::move(t));
    }
  }
  const Field& f = *Fp_;
  for (const auto& g : elems) {
    for (const auto& h : elems) {
      const Triple c = commutator(g, h);
      if (!is_zero_vec(c.x) || !is_zero_vec(c.u)) return "[Gamma_1, Gamma_1] is not inside Gamma_3";
      const Vec expect = vec_add(f, bracket(g.x, h.u), vec_neg(f, bracket(h.x, g.u)));
      if (c.w != expect) return "commutator Gamma_3-part differs from x.u' - x'.u";
      const bool g2 = is_zero_vec(g.x), h2 = is_zero_vec(h.x);
      if (g2 && h2 && !is_zero_vec(c.w)) return "[Gamma_2, Gamma_2] is not trivial";
      if (is_zero_vec(h.x) && is_zero_vec(h.u) && !is_zero_vec(c.w)) {
        return "[Gamma_1, Gamma_3] is not trivial";
      }
      if (mul(mul(g, h), inv(h)) != g) return "group law is inconsistent";
    }
  }
  return std::nullopt;
}

void ModuleNursery::verify() const {
  for (const auto& check : {check_generation(), check_annihilator(), check_filtration()}) {
    if (check) throw PropertyViolation(name_ + ": " + *check);
  }
}

Kind::Kind(NurseryPtr nursery, Subspace V) : nursery_(std::move(nursery)), V_(std::move(V)) {
  if (V_.ambient_dim() != nursery_->r()) throw InvalidArgument("subspace does not live in R");
}

bool Kind::contains(const Triple& t) const {
  return t.x.size() == nursery_->r() && t.u.size() == nursery_->m() &&
         t.w.size() == nursery_->m() && V_.contains(std::span<const Elem>(t.x.data(), t.x.size()));
}

std::pair<SmallGroup, std::vector<Triple>> Kind::to_group(std::size_t cap) const {
  const ModuleNursery& N = *nursery_;
  const Field& f = *N.prime_field();
  const std::uint32_t p = N.p();
  const std::size_t dv = V_.dim();
  const std::size_t m = N.m();
  std::uint64_t nv = 1, nm = 1;
  for (std::size_t i = 0; i < dv; ++i) nv *= p;
  for (std::size_t i = 0; i < m; ++i) nm *= p;
  const std::uint64_t order = nv * nm * nm;
  if (order > cap) {
    throw CapExceeded("kind of order " + std::to_string(order) + " exceeds cap " + std::to_string(cap));
  }
  auto digits = [&](std::uint64_t idx, std::size_t len) {
    Vec d(len);
    for (std::size_t i = 0; i < len; ++i) {
      d[i] = static_cast<Elem>(idx % p);
      idx /= p;
    }
    return d;
  };
  auto encode = [&](const Vec& d) {
    std::uint64_t idx = 0;
    for (std::size_t i = d.size(); i-- > 0;) idx = idx * p + d[i];
    return idx;
  };
  std::vector<Vec> xs(nv);
  for (std::uint64_t vi = 0; vi < nv; ++vi) {
    const Vec c = digits(vi, dv);
    Vec x(N.r(), 0);
    for (std::size_t k = 0; k < dv; ++k) {
      if (!c[k]) continue;
      const auto row = V_.basis().row(k);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = f.add(x[j], f.mul(c[k], row[j]));
    }
    xs[vi] = std::move(x);
  }
  std::vector<Vec> us(nm);
  for (std::uint64_t ui = 0; ui < nm; ++ui) us[ui] = digits(ui, m);
  auto add_table = [&](std::uint64_t n, std::size_t len) {
    std::vector<std::uint32_t> t(n * n);
    for (std::uint64_t a = 0; a < n; ++a) {
      const Vec da = digits(a, len);
      for (std::uint64_t b = 0; b < n; ++b) {
        t[a * n + b] = static_cast<std::uint32_t>(encode(vec_add(f, da, digits(b, len))));
      }
    }
    return t;
  };
  const auto addV = add_table(nv, dv);
  const auto addM = add_table(nm, m);
  std::vector<std::uint32_t> bt(nv * nm);
  for (std::uint64_t vi = 0; vi < nv; ++vi) {
    for (std::uint64_t ui = 0; ui < nm; ++ui) {
      bt[vi * nm + ui] = static_cast<std::uint32_t>(encode(N.bracket(xs[vi], us[ui])));
    }
  }
  const std::size_t n = static_cast<std::size_t>(order);
  std::vector<SmallGroup::Index> table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::uint64_t va = a % nv, ua = (a / nv) % nm, wa = a / (nv * nm);
    for (std::size_t b = 0; b < n; ++b) {
      const std::uint64_t vb = b % nv, ub = (b / nv) % nm, wb = b / (nv * nm);
      const std::uint64_t v = addV[va * nv + vb];
      const std::uint64_t u = addM[ua * nm + ub];
      const std::uint64_t w = addM[addM[wa * nm + wb] * nm + bt[va * nm + ub]];
      table[a * n + b] = static_cast<SmallGroup::Index>(v + nv * (u + nm * w));
    }
  }
  std::vector<Triple> labels(n);
  for (std::size_t a = 0; a < n; ++a) {
    labels[a] = {xs[a % nv], us[(a / nv) % nm], us[a / (nv * nm)]};
  }
  return {SmallGroup::from_table(std::move(table), n), std::move(labels)};
}

Kind kind_from_subspace(const NurseryPtr& nursery, const Subspace& V, bool relaxed) {
  if (!relaxed) {
    for (const auto& s : nursery->S()) {
      if (!V.contains(std::span<const Elem>(s.data(), s.size()))) {
        throw InvalidArgument("V does not contain the generating set S");
      }
    }
  }
  return Kind(nursery, V);
}

bool derived_equals_gamma3(const Kind& q) {
  const ModuleNursery& N = q.nursery();
  Matrix prods(N.prime_field(), q.V().dim() * N.m(), N.m());
  std::size_t row = 0;
  for (std::size_t i = 0; i < q.V().dim(); ++i) {
    const auto xr = q.V().basis().row(i);
    const Vec x(xr.begin(), xr.end());
    for (std::size_t j = 0; j < N.m(); ++j) {
      const Vec v = N.bracket(x, unit_vec(N.m(), j));
      for (std::size_t k = 0; k < N.m(); ++k) prods.at(row, k) = v[k];
      ++row;
    }
  }
  return rank(prods) == N.m();
}

Reconstruction reconstruct(const SmallGroup& Q, const ModuleNursery& nursery,
                           const std::vector<Vec>& S, const std::vector<Vec>& T,
                           const std::vector<SmallGroup::Index>& rho,
                           const std::vector<SmallGroup::Index>& mu, const CoordinateOracle& oracle) {
  using Index = SmallGroup::Index;
  const FieldPtr& Fp = nursery.prime_field();
  const std::size_t m = nursery.m();
  if (S.empty() || rho.size() != S.size()) throw InvalidArgument("rho must assign every element of S");
  if (mu.size() != T.size() || T.empty()) throw InvalidArgument("mu must assign every element of T");
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (rho[i] >= Q.order() || oracle.alpha(rho[i]) != S[i]) {
      throw InvalidArgument("rho(s) does not lie over s for S element " + std::to_string(i));
    }
  }
  for (std::size_t j = 0; j < T.size(); ++j) {
    if (mu[j] >= Q.order() || !is_zero_vec(oracle.alpha(mu[j])) || oracle.beta(mu[j]) != T[j]) {
      throw InvalidArgument("mu(t) is not a Gamma_2 element over t for T element " +
                            std::to_string(j));
    }
  }
  Reconstruction out;
  for (Index q = 0; q < Q.order(); ++q) {
    bool in = true;
    for (Index t : mu) {
      if (Q.commutator(q, t) != Q.identity()) {
        in = false;
        break;
      }
    }
    if (in) out.X.push_back(q);
  }
  for (Index q : out.X) {
    if (!is_zero_vec(oracle.alpha(q))) {
      throw PropertyViolation("X strictly contains Gamma_2: T has a nonzero common annihilator");
    }
  }
  std::size_t gamma2_size = 0;
  for (Index q = 0; q < Q.order(); ++q) gamma2_size += is_zero_vec(oracle.alpha(q)) ? 1 : 0;
  if (gamma2_size != out.X.size()) throw PropertyViolation("X is smaller than Gamma_2");

  std::vector<Index> ycomm;
  for (Index x : out.X) ycomm.push_back(Q.commutator(rho.front(), x));
  out.Y = Q.closure(ycomm);
  out.Z = Q.commutator_subgroup(out.X, out.X);

  // Gamma_2 elements over the standard basis of M.
  std::vector<Index> ebasis(m, static_cast<Index>(-1));
  for (Index x : out.X) {
    const Vec b = oracle.beta(x);
    for (std::size_t j = 0; j < m; ++j) {
      if (ebasis[j] == static_cast<Index>(-1) && b == unit_vec(m, j)) ebasis[j] = x;
    }
  }
  for (auto x : ebasis) {
    if (x == static_cast<Index>(-1)) throw PropertyViolation("Gamma_2 misses a basis vector of M");
  }
  auto chi = [&](Index q) {
    Matrix C(Fp, m, m);
    for (std::size_t j = 0; j < m; ++j) {
      const Vec g = oracle.gamma(Q.commutator(q, ebasis[j]));
      for (std::size_t k = 0; k < m; ++k) C.at(k, j) = g[k];
    }
    return C;
  };
  // A basis of Q/X by greedy closure.
  std::vector<Index> gens = out.X;
  std::vector<char> inH(Q.order(), 0);
  for (Index x : out.X) inH[x] = 1;
  std::vector<Index> qbasis;
  for (Index q = 0; q < Q.order(); ++q) {
    if (inH[q]) continue;
    qbasis.push_back(q);
    gens.push_back(q);
    std::fill(inH.begin(), inH.end(), 0);
    for (Index h : Q.closure(gens)) inH[h] = 1;
  }
  for (Index q : qbasis) out.chi.push_back(chi(q));

  const std::size_t r = nursery.r();
  Matrix images(Fp, out.chi.size(), m * m);
  for (std::size_t i = 0; i < out.chi.size(); ++i) {
    for (std::size_t j = 0; j < m * m; ++j) images.at(i, j) = out.chi[i].entries()[j];
  }
  out.chi_injective = rank(images) == out.chi.size();
  Matrix rimg(Fp, r, m * m);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < m * m; ++j) rimg.at(i, j) = nursery.bracket_matrices()[i].entries()[j];
  }
  const Subspace ring_image(rimg);
  out.chi_in_ring_image = std::all_of(out.chi.begin(), out.chi.end(), [&](const Matrix& C) {
    return ring_image.contains(std::span<const Elem>(C.entries().data(), C.entries().size()));
  });
  out.chi_matches_rho = true;
  for (std::size_t i = 0; i < S.size(); ++i) {
    Matrix expect(Fp, m, m);
    for (std::size_t k = 0; k < r; ++k) {
      if (S[i][k]) expect = expect + nursery.bracket_matrices()[k].scaled(S[i][k]);
    }
    if (!(chi(rho[i]) == expect)) out.chi_matches_rho = false;
  }
  return out;
}

RoundTrip reconstruct_round_trip(const NurseryPtr& nursery, const Subspace& V, std::mt19937_64& rng) {
  using Index = SmallGroup::Index;
  const Kind q(nursery, V);
  auto [G0, labels0] = q.to_group(1u << 12);
  std::vector<Index> perm(G0.order());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Index>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  const SmallGroup G = relabel_group(G0, perm);
  std::vector<Triple> labels(G.order());
  for (std::size_t i = 0; i < labels0.size(); ++i) labels[perm[i]] = labels0[i];
  const CoordinateOracle oracle{[&](Index i) { return labels[i].x; }, [&](Index i) { return labels[i].u; },
                                [&](Index i) { return labels[i].w; }};
  auto pick = [&](auto pred) {
    std::vector<Index> cands;
    for (Index i = 0; i < G.order(); ++i) {
      if (pred(labels[i])) cands.push_back(i);
    }
    if (cands.empty()) throw InvalidArgument("no element of the kind lies over the requested coordinates");
    return cands[rng() % cands.size()];
  };
  std::vector<Index> rho, mu;
  for (const auto& s : nursery->S()) rho.push_back(pick([&](const Triple& t) { return t.x == s; }));
  for (const auto& t : nursery->T()) {
    mu.push_back(pick([&](const Triple& x) { return is_zero_vec(x.x) && x.u == t; }));
  }
  const Reconstruction rec = reconstruct(G, *nursery, nursery->S(), nursery->T(), rho, mu, oracle);
  std::vector<Index> g2, g3, g4;
  for (Index i = 0; i < G.order(); ++i) {
    const Triple& t = labels[i];
    if (!is_zero_vec(t.x)) continue;
    g2.push_back(i);
    if (!is_zero_vec(t.u)) continue;
    g3.push_back(i);
    if (is_zero_vec(t.w)) g4.push_back(i);
  }
  RoundTrip rt;
  rt.order = G.order();
  if (rec.X != g2) rt.failure = "X differs from Gamma_2";
  else if (rec.Y != g3) rt.failure = "Y differs from Gamma_3";
  else if (rec.Z != g4) rt.failure = "Z differs from Gamma_4";
  else if (!rec.chi_injective) rt.failure = "chi is not injective";
  else if (!rec.chi_in_ring_image) rt.failure = "chi leaves the image of R";
  else if (!rec.chi_matches_rho) rt.failure = "chi(rho(s)) differs from the action of s";
  rt.exact = rt.failure.empty();
  return rt;
}

std::string to_string(BoundFormula f) {
  switch (f) {
    case BoundFormula::NurseryCount: return "nursery_count";
    case BoundFormula::OrbitUpper: return "orbit_upper";
    case BoundFormula::CoroUdLower: return "coro_ud_lower";
  }
  return "unknown";
}

BoundFormula bound_formula_from_string(const std::string& name) {
  for (auto f : {BoundFormula::NurseryCount, BoundFormula::OrbitUpper, BoundFormula::CoroUdLower}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown bound formula '" + name + "'");
}

BoundValue bound_log(BoundFormula formula, const BoundParams& bp) {
  BoundValue v;
  switch (formula) {
    case BoundFormula::NurseryCount: {
      if (bp.r < 0 || bp.l < 0 || bp.s < 0 || bp.m < 0 || bp.t < 0) {
        throw InvalidArgument("nursery_count parameters must be nonnegative");
      }
      v.raw = static_cast<double>((bp.l - bp.s) * (bp.r - bp.l) - bp.l * bp.s - bp.m * bp.t);
      v.detail = "(l-s)(r-l) - l s - m t";
      break;
    }
    case BoundFormula::CoroUdLower: {
      if (bp.a < 1 || bp.e < 1 || bp.l < 0) throw InvalidArgument("coro_ud_lower needs a, e >= 1");
      const std::int64_t a2e = bp.a * bp.a * bp.e;
      v.raw = static_cast<double>((bp.l - 3) * (a2e - bp.l) - 3 * bp.l - a2e);
      v.detail = "(l-3)(a^2 e - l) - 3l - a^2 e";
      break;
    }
    case BoundFormula::OrbitUpper: {
      if (bp.a < 1 || bp.b < 1 || bp.c < 1 || bp.e < 1) {
        throw InvalidArgument("orbit_upper needs a, b, c, e >= 1");
      }
      if (!is_prime(bp.p)) throw InvalidArgument("orbit_upper needs a prime p");
      std::int64_t a = bp.a, c = bp.c;
      if (a < c) std::swap(a, c);
      const auto e = static_cast<std::uint64_t>(bp.e);
      const std::uint64_t q = static_cast<std::uint64_t>(ipow(BigInt(bp.p), e));
      const auto ua = static_cast<std::uint32_t>(a), ub = static_cast<std::uint32_t>(bp.b),
                 uc = static_cast<std::uint32_t>(c);
      BigInt order;
      if (a > c) {
        order = BigInt(e) * gl_order(ua, q) * gl_order(ub, q) * gl_order(uc, q) / (q - 1);
        v.detail = "|Gal(K)| |GL_a| |GL_b| |GL_c| / |K^x| (a > c)";
      } else if (a > 1) {
        order = 2 * BigInt(e) * gl_order(ua, q) * gl_order(ub, q) * gl_order(ua, q) / (q - 1);
        v.detail = "2 |Gal(K)| |GL_a| |GL_b| |GL_a| / |K^x| (a = c > 1)";
      } else {
        order = BigInt(e) * gsp_order(ub, q);
        v.detail = "|Gal(K)| |GSp_2b(K)| (a = c = 1)";
      }
      v.raw = log_base(order, static_cast<double>(bp.p));
      break;
    }
  }
  v.clamped = std::max(0.0, v.raw);
  return v;
}

UnitriangularExponents unitriangular_exponents(std::uint32_t d, std::uint32_t e) {
  UnitriangularExponents u;
  const double D = d, E = e;
  u.binomial_form = (D - 1) * (D - 2) / 2 * E;
  u.quadratic_form = D * D * E / 4;
  u.exact = E * D * (D - 1) / 2;
  return u;
}

std::vector<Subspace> subspaces_containing(const Subspace& W, std::size_t l, std::uint64_t cap) {
  const std::size_t n = W.ambient_dim();
  const std::size_t w = W.dim();
  std::vector<Subspace> out;
  if (l < w || l > n) return out;
  std::vector<std::size_t> free;
  {
    std::vector<bool> piv(n, false);
    for (auto c : W.pivots()) piv[c] = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!piv[j]) free.push_back(j);
    }
  }
  for_each_subspace(
      W.field(), n - w, l - w,
      [&](const Subspace& U) {
        Matrix gens(W.field(), l, n);
        gens.set_block(0, 0, W.basis());
        for (std::size_t i = 0; i < U.dim(); ++i) {
          for (std::size_t j = 0; j < free.size(); ++j) gens.at(w + i, free[j]) = U.basis().at(i, j);
        }
        out.emplace_back(gens);
        return true;
      },
      cap);
  return out;
}

CensusResult census(const NurseryPtr& nursery, std::size_t l, const CensusCaps& caps, bool relaxed) {
  const Subspace W = relaxed ? Subspace::zero(nursery->prime_field(), nursery->r()) : nursery->span_S();
  const auto spaces = subspaces_containing(W, l, caps.max_kinder);
  CensusResult res;
  res.kinder = spaces.size();
  std::vector<SmallGroup> groups;
  groups.reserve(spaces.size());
  for (const auto& V : spaces) {
    const Kind q(nursery, V);
    if (res.group_order == 0) {
      std::uint64_t order = 1;
      for (std::size_t i = 0; i < q.log_order(); ++i) order *= nursery->p();
      if (order > caps.iso_cap) {
        throw CapExceeded("kinder of order " + std::to_string(order) + " exceed the iso cap " +
                          std::to_string(caps.iso_cap));
      }
      res.group_order = order;
    }
    groups.push_back(q.to_group(caps.iso_cap).first);
  }
  const auto cls = iso_classes(groups, caps.iso_cap);
  res.classes = cls.class_count();
  for (std::size_t c = 0; c < cls.class_count(); ++c) {
    const std::size_t rep = cls.representatives[c];
    CensusClass row{fingerprint(groups[rep]), spaces[rep], 0};
    res.table.push_back(std::move(row));
  }
  for (auto c : cls.class_of) ++res.table[c].members;

  BoundParams bp;
  bp.r = static_cast<std::int64_t>(nursery->r());
  bp.l = static_cast<std::int64_t>(l);
  bp.s = static_cast<std::int64_t>(nursery->S().size());
  bp.m = static_cast<std::int64_t>(nursery->m());
  bp.t = static_cast<std::int64_t>(nursery->T().size());
  res.bound = bound_log(BoundFormula::NurseryCount, bp);
  const double have = res.classes ? std::log(static_cast<double>(res.classes)) /
                                        std::log(static_cast<double>(nursery->p()))
                                  : -1.0;
  res.bound_holds = relaxed || res.kinder == 0 || have + 1e-9 >= res.bound.clamped;
  return res;
}

}  // namespace kinder
