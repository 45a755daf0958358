#include "kinder/linalg.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "kinder/errors.hpp"

namespace kinder {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw InvalidArgument("matrix entry count does not match shape");
  for (auto x : data_) {
    if (!field_->valid(x)) throw InvalidArgument("matrix entry outside the field");
  }
}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

void require_same_field(const Matrix& a, const Matrix& b) {
  if (a.field() != b.field() && !same_field(a.F(), b.F())) {
    throw InvalidArgument("matrices over different fields");
  }
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  }
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  require_same_field(*this, other);
  if (cols_ != other.rows_) throw InvalidArgument("matrix product shape mismatch");
  const Field& f = *field_;
  Matrix r(field_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Elem a = at(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        r.at(i, j) = f.add(r.at(i, j), f.mul(a, other.at(k, j)));
      }
    }
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& other) const {
  require_same_field(*this, other);
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("matrix sum shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_->add(data_[i], other.data_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& other) const { return *this + (-other); }

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_) x = field_->neg(x);
  return r;
}

Matrix Matrix::scaled(Elem s) const {
  Matrix r = *this;
  for (auto& x : r.data_) x = field_->mul(x, s);
  return r;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
}

bool Matrix::operator==(const Matrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidArgument("block out of range");
  Matrix b(field_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b.at(i, j) = at(r0 + i, c0 + j);
  }
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidArgument("block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b.at(i, j);
  }
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ' ';
      os << at(i, j);
    }
  }
  os << ']';
  return os.str();
}

std::vector<std::size_t> rref_in_place(Matrix& m) {
  const Field& f = m.F();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m.at(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    }
    const Elem inv = f.inv(m.at(r, c));
    if (inv != 1) {
      for (std::size_t j = c; j < cols; ++j) m.at(r, j) = f.mul(m.at(r, j), inv);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Elem factor = m.at(i, c);
      if (!factor) continue;
      const Elem nf = f.neg(factor);
      for (std::size_t j = c; j < cols; ++j) {
        const Elem x = m.at(r, j);
        if (x) m.at(i, j) = f.add(m.at(i, j), f.mul(nf, x));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  m = m.block(0, 0, r, cols);
  return pivots;
}

std::size_t rank(Matrix m) { return rref_in_place(m).size(); }

Subspace::Subspace(const Matrix& generators) : basis_(generators) {
  pivots_ = rref_in_place(basis_);
}

Subspace::Subspace(Matrix basis, std::vector<std::size_t> pivots, bool)
    : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

Subspace Subspace::zero(FieldPtr field, std::size_t n) {
  return Subspace(Matrix(std::move(field), 0, n), {}, true);
}

Subspace Subspace::full(FieldPtr field, std::size_t n) {
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  return Subspace(Matrix::identity(std::move(field), n), std::move(piv), true);
}

bool Subspace::contains(std::span<const Elem> v) const {
  if (v.size() != ambient_dim()) throw InvalidArgument("vector length does not match subspace");
  const Field& f = *field();
  std::vector<Elem> w(v.begin(), v.end());
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    const Elem c = w[pivots_[i]];
    if (!c) continue;
    const Elem nc = f.neg(c);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = f.add(w[j], f.mul(nc, basis_.at(i, j)));
  }
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  for (std::size_t i = 0; i < other.dim(); ++i) {
    if (!contains(other.basis_.row(i))) return false;
  }
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_dim() != other.ambient_dim()) throw InvalidArgument("subspace dimension mismatch");
  Matrix m(field(), dim() + other.dim(), ambient_dim());
  m.set_block(0, 0, basis_);
  m.set_block(dim(), 0, other.basis_);
  return Subspace(m);
}

bool Subspace::operator==(const Subspace& other) const {
  return ambient_dim() == other.ambient_dim() && basis_ == other.basis_;
}

bool Subspace::operator<(const Subspace& other) const {
  if (ambient_dim() != other.ambient_dim()) return ambient_dim() < other.ambient_dim();
  if (dim() != other.dim()) return dim() < other.dim();
  return basis_.entries() < other.basis_.entries();
}

Matrix nullspace_basis(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref_in_place(r);
  const Field& f = m.F();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix basis(m.field(), n - pivots.size(), n);
  std::size_t k = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    basis.at(k, free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) basis.at(k, pivots[i]) = f.neg(r.at(i, free));
    ++k;
  }
  return basis;
}

RankNullspace rank_nullspace(const Matrix& m) {
  RankNullspace out;
  out.row_space = Subspace(m);
  out.rank = out.row_space.dim();
  out.nullspace = Subspace(nullspace_basis(m));
  return out;
}

BigInt gaussian_binomial(std::uint64_t n, std::uint64_t l, std::uint64_t q) {
  if (l > n) throw InvalidArgument("subspace dimension exceeds ambient dimension");
  if (q < 2) throw InvalidArgument("field order must be at least 2");
  BigInt num = 1;
  BigInt den = 1;
  for (std::uint64_t i = 0; i < l; ++i) {
    num *= ipow(BigInt(q), n - i) - 1;
    den *= ipow(BigInt(q), i + 1) - 1;
  }
  return num / den;
}

void for_each_subspace(const FieldPtr& field, std::size_t n, std::size_t l,
                       const std::function<bool(const Subspace&)>& visit, std::uint64_t cap) {
  if (l > n) throw InvalidArgument("subspace dimension exceeds ambient dimension");
  const BigInt count = gaussian_binomial(n, l, field->order());
  if (count > cap) {
    throw CapExceeded("enumeration of " + count.str() + " subspaces exceeds cap " +
                      std::to_string(cap));
  }
  const Elem q = field->order();
  std::vector<std::size_t> piv(l);
  for (std::size_t i = 0; i < l; ++i) piv[i] = i;
  while (true) {
    // free positions: row i, columns after its pivot that are not pivots
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = piv[i] + 1; j < n; ++j) {
        if (!is_pivot[j]) free.emplace_back(i, j);
      }
    }
    Matrix m(field, l, n);
    for (std::size_t i = 0; i < l; ++i) m.at(i, piv[i]) = 1;
    std::vector<Elem> digits(free.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < free.size(); ++k) m.at(free[k].first, free[k].second) = digits[k];
      if (!visit(Subspace::from_rref_unchecked(m, piv))) return;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == q) digits[k++] = 0;
      if (k == digits.size()) break;
    }
    // next combination of pivot columns
    std::size_t i = l;
    while (i > 0 && piv[i - 1] == n - l + (i - 1)) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < l; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, std::size_t n, std::size_t l,
                                          std::uint64_t cap) {
  std::vector<Subspace> out;
  for_each_subspace(
      field, n, l,
      [&](const Subspace& s) {
        out.push_back(s);
        return true;
      },
      cap);
  return out;
}

Matrix random_matrix(const FieldPtr& field, std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng) {
  std::uniform_int_distribution<Elem> dist(0, field->order() - 1);
  Matrix m(field, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
  }
  return m;
}

Subspace random_subspace(const FieldPtr& field, std::size_t n, std::size_t l, std::mt19937_64& rng) {
  if (l > n) throw InvalidArgument("subspace dimension exceeds ambient dimension");
  while (true) {
    Subspace s(random_matrix(field, l, n, rng));
    if (s.dim() == l) return s;
  }
}

std::vector<Elem> flatten_to_prime(const Matrix& m) {
  const std::size_t e = m.F().degree();
  std::vector<Elem> out;
  out.reserve(m.rows() * m.cols() * e);
  for (auto x : m.entries()) {
    const auto v = m.F().to_vector(x);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Matrix unflatten_from_prime(const FieldPtr& field, std::size_t rows, std::size_t cols,
                            std::span<const Elem> coords) {
  const std::size_t e = field->degree();
  if (coords.size() != rows * cols * e) throw InvalidArgument("coordinate count does not match shape");
  Matrix m(field, rows, cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    m.at(k / cols, k % cols) = field->from_vector(coords.subspan(k * e, e));
  }
  return m;
}

FieldPtr prime_field_of(const Field& field) {
  static std::mutex mu;
  static std::map<std::uint32_t, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[field.characteristic()];
  if (!slot) slot = Field::make(field.characteristic(), 1);
  return slot;
}

}  // namespace kinder
