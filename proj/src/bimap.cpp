#include "kinder/bimap.hpp"

#include "kinder/errors.hpp"

namespace kinder {

MatrixSystem::MatrixSystem(FieldPtr f, std::size_t r, std::size_t c, std::vector<Matrix> m)
    : field(std::move(f)), rows(r), cols(c), mats(std::move(m)) {
  validate();
}

void MatrixSystem::validate() const {
  if (!field) throw InvalidArgument("matrix system without a field");
  for (const auto& m : mats) {
    if (m.rows() != rows || m.cols() != cols) throw InvalidArgument("matrix system shape mismatch");
    if (m.field() != field && !same_field(m.F(), *field)) {
      throw InvalidArgument("matrix system field mismatch");
    }
  }
}

MatrixSystem MatrixSystem::transposed() const {
  MatrixSystem r(field, cols, rows);
  for (const auto& m : mats) r.mats.push_back(m.transpose());
  return r;
}

MatrixSystem MatrixSystem::negated() const {
  MatrixSystem r(field, rows, cols);
  for (const auto& m : mats) r.mats.push_back(-m);
  return r;
}

MatrixSystem random_system(const FieldPtr& field, std::size_t count, std::size_t rows,
                           std::size_t cols, std::mt19937_64& rng) {
  MatrixSystem s(field, rows, cols);
  for (std::size_t i = 0; i < count; ++i) s.mats.push_back(random_matrix(field, rows, cols, rng));
  return s;
}

namespace {

struct HomShape {
  std::size_t a, s, b, t;
};

HomShape check_hom_shapes(const MatrixSystem& phi, const MatrixSystem& ups) {
  phi.validate();
  ups.validate();
  if (phi.size() != ups.size()) throw InvalidArgument("systems have different lengths");
  if (phi.field != ups.field && !same_field(*phi.field, *ups.field)) {
    throw InvalidArgument("systems over different fields");
  }
  return {ups.rows, phi.rows, phi.cols, ups.cols};
}

Matrix hom_equations(const MatrixSystem& phi, const MatrixSystem& ups, int sign, const HomShape& sh) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const Field& f = *phi.field;
  const std::size_t unknowns = sh.a * sh.s + sh.b * sh.t;
  const std::size_t eqs = phi.size() * sh.a * sh.b;
  Matrix m(phi.field, eqs, unknowns);
  std::size_t row = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Matrix& P = phi.mats[i];
    const Matrix& U = ups.mats[i];
    for (std::size_t r = 0; r < sh.a; ++r) {
      for (std::size_t k = 0; k < sh.b; ++k) {
        // sum_j A[r][j] P[j][k] - sign * sum_l U[r][l] B[k][l]
        for (std::size_t j = 0; j < sh.s; ++j) m.at(row, r * sh.s + j) = P.at(j, k);
        for (std::size_t l = 0; l < sh.t; ++l) {
          const Elem u = U.at(r, l);
          m.at(row, sh.a * sh.s + k * sh.t + l) = sign == 1 ? f.neg(u) : u;
        }
        ++row;
      }
    }
  }
  return m;
}

}  // namespace

HomSpace hom_space(const MatrixSystem& phi, const MatrixSystem& ups, int sign) {
  const HomShape sh = check_hom_shapes(phi, ups);
  const Matrix eqs = hom_equations(phi, ups, sign, sh);
  const Matrix null = nullspace_basis(eqs);
  HomSpace h;
  h.field = phi.field;
  h.a = sh.a;
  h.s = sh.s;
  h.b = sh.b;
  h.t = sh.t;
  for (std::size_t k = 0; k < null.rows(); ++k) {
    Matrix A(phi.field, sh.a, sh.s);
    Matrix B(phi.field, sh.b, sh.t);
    for (std::size_t i = 0; i < sh.a * sh.s; ++i) A.at(i / sh.s, i % sh.s) = null.at(k, i);
    for (std::size_t i = 0; i < sh.b * sh.t; ++i) {
      B.at(i / sh.t, i % sh.t) = null.at(k, sh.a * sh.s + i);
    }
    h.basis.emplace_back(std::move(A), std::move(B));
  }
  return h;
}

std::size_t hom_dimension(const MatrixSystem& phi, const MatrixSystem& ups, int sign) {
  const HomShape sh = check_hom_shapes(phi, ups);
  Matrix eqs = hom_equations(phi, ups, sign, sh);
  return eqs.cols() - rref_in_place(eqs).size();
}

HomSpace end_space(const MatrixSystem& phi) { return hom_space(phi, phi, 1); }
std::size_t end_dimension(const MatrixSystem& phi) { return hom_dimension(phi, phi, 1); }

bool satisfies_hom(const MatrixSystem& phi, const MatrixSystem& ups, int sign, const Matrix& A,
                   const Matrix& B) {
  const Matrix Bt = B.transpose();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    Matrix rhs = ups.mats[i] * Bt;
    if (sign == -1) rhs = -rhs;
    if (!(A * phi.mats[i] == rhs)) return false;
  }
  return true;
}

MatrixSystem lambda_build(const MatrixSystem& phi) {
  const std::size_t n = phi.rows + phi.cols;
  MatrixSystem out(phi.field, n, n);
  for (const auto& P : phi.mats) {
    Matrix L(phi.field, n, n);
    L.set_block(0, phi.rows, P);
    L.set_block(phi.rows, 0, -P.transpose());
    out.mats.push_back(std::move(L));
  }
  return out;
}

namespace {

MatrixSystem shifted_identity_system(std::size_t m, std::size_t n, const FieldPtr& K) {
  MatrixSystem sys(K, m, n);
  auto shifted = [&](std::size_t offset) {
    Matrix M(K, m, n);
    for (std::size_t i = 0; i < m; ++i) M.at(i, offset + i) = 1;
    return M;
  };
  sys.mats.push_back(shifted(0));
  for (std::size_t i = 1; m * i <= n - 1; ++i) sys.mats.push_back(shifted(1 + m * (i - 1)));
  sys.mats.push_back(shifted(n - m));
  return sys;
}

// Evaluates a polynomial over the prime field at an element of E.
Elem eval_prime_poly(const Field& E, const Poly& f, Elem x) {
  Elem acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = E.add(E.mul(acc, x), E.from_int(f[i]));
  return acc;
}

MatrixSystem extension_system(std::size_t m, const FieldPtr& K) {
  const std::uint32_t p = K->characteristic();
  const std::uint32_t e = K->degree();
  const std::uint64_t qm = [&] {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < m; ++i) r *= K->order();
    return r;
  }();
  if (qm > Field::kMaxOrder) throw InvalidArgument("extension field too large for witness system");
  const FieldPtr E = Field::make(p, static_cast<std::uint32_t>(e * m));

  // Image of K's generator: a root of K's modulus in E.
  Elem root = 0;
  if (e > 1) {
    for (Elem z = 1; z < E->order(); ++z) {
      if (eval_prime_poly(*E, K->modulus(), z) == 0) {
        root = z;
        break;
      }
    }
    if (!root) throw PropertyViolation("no embedding of the base field found");
  }
  const Elem beta = E->primitive();
  const std::size_t N = static_cast<std::size_t>(e) * m;

  // Columns r^d beta^j over F_p, (j, d) ordered as j*e + d.
  const FieldPtr Fp = prime_field_of(*K);
  Matrix basis(Fp, N, N);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t d = 0; d < e; ++d) {
      const Elem rd = e > 1 ? E->pow(root, static_cast<std::int64_t>(d)) : 1;
      const auto v = E->to_vector(E->mul(rd, E->pow(beta, static_cast<std::int64_t>(j))));
      for (std::size_t i = 0; i < N; ++i) basis.at(i, j * e + d) = v[i];
    }
  }
  // Invert via [basis | I].
  Matrix aug(Fp, N, 2 * N);
  aug.set_block(0, 0, basis);
  aug.set_block(0, N, Matrix::identity(Fp, N));
  rref_in_place(aug);
  if (aug.rows() < N) throw PropertyViolation("extension basis is singular");
  const Matrix inv = aug.block(0, N, N, N);

  auto k_coords = [&](Elem y) {
    const auto v = E->to_vector(y);
    std::vector<Elem> out(m);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::uint32_t> kv(e);
      for (std::size_t d = 0; d < e; ++d) {
        Elem acc = 0;
        for (std::size_t i = 0; i < N; ++i) acc = Fp->add(acc, Fp->mul(inv.at(j * e + d, i), v[i]));
        kv[d] = acc;
      }
      out[j] = K->from_vector(kv);
    }
    return out;
  };
  auto matrix_of = [&](auto&& op) {
    Matrix M(K, m, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto col = k_coords(op(E->pow(beta, static_cast<std::int64_t>(j))));
      for (std::size_t i = 0; i < m; ++i) M.at(i, j) = col[i];
    }
    return M;
  };
  MatrixSystem sys(K, m, m);
  sys.mats.push_back(Matrix::identity(K, m));
  sys.mats.push_back(matrix_of([&](Elem y) { return E->mul(beta, y); }));
  sys.mats.push_back(matrix_of([&](Elem y) { return E->frobenius(y, e); }));
  return sys;
}

}  // namespace

MatrixSystem witness_system(std::size_t m, std::size_t n, const FieldPtr& K) {
  if (m == 0 || n == 0) throw InvalidArgument("witness dimensions must be positive");
  if (m > n) throw InvalidArgument("witness_system needs m <= n; transpose for m > n");
  if (m < n) return shifted_identity_system(m, n, K);
  return extension_system(m, K);
}

Bimap::Bimap(FieldPtr field, std::size_t left, std::size_t mid, std::size_t target)
    : field_(std::move(field)), left_(left), mid_(mid), target_(target) {
  consts_.reserve(target);
  for (std::size_t k = 0; k < target; ++k) consts_.emplace_back(field_, left, mid);
}

std::vector<Elem> Bimap::eval(std::span<const Elem> x, std::span<const Elem> y) const {
  if (x.size() != left_ || y.size() != mid_) throw InvalidArgument("bimap argument size mismatch");
  const Field& f = *field_;
  std::vector<Elem> out(target_, 0);
  for (std::size_t k = 0; k < target_; ++k) {
    Elem acc = 0;
    for (std::size_t i = 0; i < left_; ++i) {
      if (!x[i]) continue;
      for (std::size_t j = 0; j < mid_; ++j) {
        acc = f.add(acc, f.mul(x[i], f.mul(consts_[k].at(i, j), y[j])));
      }
    }
    out[k] = acc;
  }
  return out;
}

Bimap matrix_multiplication_bimap(const FieldPtr& K, std::size_t a, std::size_t b, std::size_t c,
                                  bool over_prime) {
  const std::size_t e = over_prime ? K->degree() : 1;
  const FieldPtr F = over_prime ? prime_field_of(*K) : K;
  Bimap bm(F, a * b * e, b * c * e, a * c * e);
  // basis element `idx` of M_{r x s}(K): entry idx / e, scalar with unit
  // coordinate idx % e (or the entry 1 when not flattening)
  auto unit = [&](std::size_t r, std::size_t s, std::size_t idx) {
    Matrix M(K, r, s);
    if (over_prime) {
      std::vector<std::uint32_t> v(e, 0);
      v[idx % e] = 1;
      M.at((idx / e) / s, (idx / e) % s) = K->from_vector(v);
    } else {
      M.at(idx / s, idx % s) = 1;
    }
    return M;
  };
  for (std::size_t i = 0; i < a * b * e; ++i) {
    const Matrix x = unit(a, b, i);
    for (std::size_t j = 0; j < b * c * e; ++j) {
      const Matrix prod = x * unit(b, c, j);
      const std::vector<Elem> flat = over_prime ? flatten_to_prime(prod) : prod.entries();
      for (std::size_t k = 0; k < flat.size(); ++k) bm.constants(k).at(i, j) = flat[k];
    }
  }
  return bm;
}

namespace {

Matrix nucleus_equations(const Bimap& bm, const Subspace& left_sub) {
  if (left_sub.ambient_dim() != bm.left_dim()) {
    throw InvalidArgument("left subspace does not live in the bimap's left space");
  }
  const Field& f = *bm.field();
  const std::size_t M = bm.mid_dim();
  const std::size_t T = bm.target_dim();
  Matrix eqs(bm.field(), left_sub.dim() * M * T, M * M + T * T);
  std::size_t row = 0;
  for (std::size_t r = 0; r < left_sub.dim(); ++r) {
    const auto q = left_sub.basis().row(r);
    // w[k][j] = sum_i q_i C_k[i][j] = [q, e_j]_k
    std::vector<std::vector<Elem>> w(T, std::vector<Elem>(M, 0));
    for (std::size_t k = 0; k < T; ++k) {
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (!q[i]) continue;
        for (std::size_t j = 0; j < M; ++j) {
          w[k][j] = f.add(w[k][j], f.mul(q[i], bm.constants(k).at(i, j)));
        }
      }
    }
    for (std::size_t j = 0; j < M; ++j) {
      for (std::size_t k = 0; k < T; ++k) {
        // sum_j' w[k][j'] g[j'][j] - sum_k' h[k][k'] w[k'][j] = 0
        for (std::size_t jp = 0; jp < M; ++jp) eqs.at(row, jp * M + j) = w[k][jp];
        for (std::size_t kp = 0; kp < T; ++kp) {
          eqs.at(row, M * M + k * T + kp) = f.neg(w[kp][j]);
        }
        ++row;
      }
    }
  }
  return eqs;
}

}  // namespace

NucleusResult right_nucleus(const Bimap& bm, const Subspace& left_sub) {
  const std::size_t M = bm.mid_dim();
  const std::size_t T = bm.target_dim();
  const Matrix eqs = nucleus_equations(bm, left_sub);
  const Matrix null = nullspace_basis(eqs);
  NucleusResult out;
  out.field = bm.field();
  for (std::size_t k = 0; k < null.rows(); ++k) {
    Matrix g(bm.field(), M, M);
    Matrix h(bm.field(), T, T);
    for (std::size_t i = 0; i < M * M; ++i) g.at(i / M, i % M) = null.at(k, i);
    for (std::size_t i = 0; i < T * T; ++i) h.at(i / T, i % T) = null.at(k, M * M + i);
    out.basis.emplace_back(std::move(g), std::move(h));
  }
  return out;
}

std::size_t right_nucleus_dimension(const Bimap& bm, const Subspace& left_sub) {
  Matrix eqs = nucleus_equations(bm, left_sub);
  return eqs.cols() - rref_in_place(eqs).size();
}

}  // namespace kinder
