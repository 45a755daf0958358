#pragma once

// Dense matrices over a small Field, reduced row echelon forms, subspaces in
// canonical form, and subspace counting/enumeration/sampling.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kinder/arith.hpp"
#include "kinder/gf.hpp"

namespace kinder {

using Elem = Field::Elem;

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);
  static Matrix identity(FieldPtr field, std::size_t n);

  const FieldPtr& field() const { return field_; }
  const Field& F() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Elem at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Elem& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const Elem> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<Elem>& entries() const { return data_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix operator-() const;
  Matrix scaled(Elem s) const;
  bool is_zero() const;
  bool operator==(const Matrix& other) const;

  // Block helpers.
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  std::string to_string() const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

void require_same_field(const Matrix& a, const Matrix& b);

// In-place reduction to reduced row echelon form; zero rows are dropped and
// the pivot columns returned.
std::vector<std::size_t> rref_in_place(Matrix& m);
std::size_t rank(Matrix m);

// A subspace of F^n stored by its RREF basis, which is canonical.
class Subspace {
 public:
  Subspace() = default;
  // Row span of `generators` (any number of rows).
  explicit Subspace(const Matrix& generators);
  static Subspace zero(FieldPtr field, std::size_t n);
  static Subspace full(FieldPtr field, std::size_t n);
  // Caller guarantees `basis` is already in RREF with these pivots.
  static Subspace from_rref_unchecked(Matrix basis, std::vector<std::size_t> pivots) {
    return Subspace(std::move(basis), std::move(pivots), true);
  }

  const FieldPtr& field() const { return basis_.field(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Elem> v) const;
  bool contains(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  bool operator==(const Subspace& other) const;
  // Total order on canonical bases, for sorting and deduplication.
  bool operator<(const Subspace& other) const;

 private:
  Subspace(Matrix basis, std::vector<std::size_t> pivots, bool);
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

struct RankNullspace {
  std::size_t rank = 0;
  Subspace row_space;
  Subspace nullspace;  // {v : m v = 0}
};

RankNullspace rank_nullspace(const Matrix& m);

// Solutions of m v = 0 as a basis matrix (one solution per row), in the
// standard free-variable parametrization of the RREF.
Matrix nullspace_basis(const Matrix& m);

// Number of l-dimensional subspaces of F_q^n.
BigInt gaussian_binomial(std::uint64_t n, std::uint64_t l, std::uint64_t q);

constexpr std::uint64_t kDefaultSubspaceCap = 10'000'000;

// Visits every l-dimensional subspace of F^n once, in canonical form, ordered
// by pivot pattern and then by free entries. The visitor returns false to
// stop early. Throws CapExceeded if the count is above `cap`.
void for_each_subspace(const FieldPtr& field, std::size_t n, std::size_t l,
                       const std::function<bool(const Subspace&)>& visit,
                       std::uint64_t cap = kDefaultSubspaceCap);
std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, std::size_t n, std::size_t l,
                                          std::uint64_t cap = kDefaultSubspaceCap);

// Uniform l-dimensional subspace: draw l x n matrices until the rank is l.
Subspace random_subspace(const FieldPtr& field, std::size_t n, std::size_t l, std::mt19937_64& rng);
Matrix random_matrix(const FieldPtr& field, std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng);

// Coordinates over the prime field: entries row-major, each expanded into
// the e power-basis coordinates of gf's to_vector.
std::vector<Elem> flatten_to_prime(const Matrix& m);
Matrix unflatten_from_prime(const FieldPtr& field, std::size_t rows, std::size_t cols,
                            std::span<const Elem> coords);
FieldPtr prime_field_of(const Field& field);

}  // namespace kinder
