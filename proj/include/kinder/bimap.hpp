#pragma once

// Systems of matrices, the hom spaces {(A,B) : A Phi_i = sign * Ups_i B^t},
// the block system Lambda, bilinear maps with their right nucleus, and the
// explicit systems with scalar endomorphism ring.

#include <cstdint>
#include <utility>
#include <vector>

#include "kinder/linalg.hpp"

namespace kinder {

struct MatrixSystem {
  FieldPtr field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Matrix> mats;

  MatrixSystem() = default;
  MatrixSystem(FieldPtr f, std::size_t r, std::size_t c, std::vector<Matrix> m = {});
  std::size_t size() const { return mats.size(); }
  MatrixSystem transposed() const;
  MatrixSystem negated() const;
  void validate() const;
};

MatrixSystem random_system(const FieldPtr& field, std::size_t count, std::size_t rows,
                           std::size_t cols, std::mt19937_64& rng);

struct HomSpace {
  FieldPtr field;
  std::size_t a = 0, s = 0, b = 0, t = 0;  // A is a x s, B is b x t
  std::vector<std::pair<Matrix, Matrix>> basis;

  std::size_t dim_K() const { return basis.size(); }
  std::size_t dim_Fp() const { return basis.size() * field->degree(); }
};

// Phi: c matrices s x b; Ups: c matrices a x t. Solves the c*a*b linear
// equations in the a*s + b*t entries of (A, B).
HomSpace hom_space(const MatrixSystem& phi, const MatrixSystem& ups, int sign = 1);
// Same dimension without building the basis.
std::size_t hom_dimension(const MatrixSystem& phi, const MatrixSystem& ups, int sign = 1);
HomSpace end_space(const MatrixSystem& phi);
std::size_t end_dimension(const MatrixSystem& phi);
// True when A Phi_i = sign * Ups_i B^t for every i.
bool satisfies_hom(const MatrixSystem& phi, const MatrixSystem& ups, int sign, const Matrix& A,
                   const Matrix& B);

// Lambda_v = [0 Phi_v; -Phi_v^t 0].
MatrixSystem lambda_build(const MatrixSystem& phi);

// Explicit system with End = K: for m < n the shifted identity blocks
// [I 0], [0_{m x (1+m(i-1))} I 0] for 1 <= i <= (n-1)/m, and [0 I]; for m = n
// the identity, multiplication by a primitive element alpha of the degree-m
// extension E/K, and the Frobenius x -> x^{|K|}, written in the K-basis
// 1, alpha, ..., alpha^{m-1} of E.
MatrixSystem witness_system(std::size_t m, std::size_t n, const FieldPtr& K);

// Bilinear map left x mid -> target over a field, by structure constants:
// [x, y]_k = sum_ij x_i C_k[i][j] y_j.
class Bimap {
 public:
  Bimap(FieldPtr field, std::size_t left, std::size_t mid, std::size_t target);

  const FieldPtr& field() const { return field_; }
  std::size_t left_dim() const { return left_; }
  std::size_t mid_dim() const { return mid_; }
  std::size_t target_dim() const { return target_; }
  const Matrix& constants(std::size_t k) const { return consts_[k]; }
  Matrix& constants(std::size_t k) { return consts_[k]; }

  std::vector<Elem> eval(std::span<const Elem> x, std::span<const Elem> y) const;

 private:
  FieldPtr field_;
  std::size_t left_, mid_, target_;
  std::vector<Matrix> consts_;
};

// M_{a x b}(K) x M_{b x c}(K) -> M_{a x c}(K), (x, y) -> x y. With
// over_prime the spaces are flattened to F_p by flatten_to_prime.
Bimap matrix_multiplication_bimap(const FieldPtr& K, std::size_t a, std::size_t b, std::size_t c,
                                  bool over_prime = false);

struct NucleusResult {
  FieldPtr field;
  std::vector<std::pair<Matrix, Matrix>> basis;  // (g on mid, h on target)
  std::size_t dim() const { return basis.size(); }
};

// {(g,h) : [q, g v] = h [q, v] for q in left_sub, v in mid}.
NucleusResult right_nucleus(const Bimap& bm, const Subspace& left_sub);
std::size_t right_nucleus_dimension(const Bimap& bm, const Subspace& left_sub);

}  // namespace kinder
