#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kronsheaf/field.hpp"

namespace ks {

// Dense row-major matrix over an exact field.  Finite field entries are kept
// as raw encodings, rational entries as reduced GMP fractions.
class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr f, size_t rows, size_t cols);
  static Mat identity(FieldPtr f, size_t n);
  static Mat from_ints(FieldPtr f, size_t rows, size_t cols, const std::vector<long long>& entries);
  static Mat from_rows(FieldPtr f, const std::vector<std::vector<long long>>& rows);

  const FieldPtr& field() const { return f_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar at(size_t i, size_t j) const;
  void set(size_t i, size_t j, const Scalar& v);
  void set_int(size_t i, size_t j, long long v);
  uint32_t raw(size_t i, size_t j) const { return ff_[i * cols_ + j]; }
  void set_raw(size_t i, size_t j, uint32_t v) { ff_[i * cols_ + j] = v; }
  const mpq_class& rat(size_t i, size_t j) const { return qq_[i * cols_ + j]; }
  mpq_class& rat(size_t i, size_t j) { return qq_[i * cols_ + j]; }
  bool entry_is_zero(size_t i, size_t j) const;
  // Adds c * v into entry (i,j).
  void add_to(size_t i, size_t j, const Scalar& v);

  bool is_zero() const;
  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat transpose() const;
  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat scaled(const Scalar& c) const;
  Mat block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  void set_block(size_t r0, size_t c0, const Mat& b);
  Mat column(size_t j) const { return block(0, j, rows_, 1); }
  Mat row(size_t i) const { return block(i, 0, 1, cols_); }
  Mat select_columns(const std::vector<size_t>& idx) const;
  Mat select_rows(const std::vector<size_t>& idx) const;

  static Mat hstack(const std::vector<Mat>& parts, FieldPtr f, size_t rows);
  static Mat vstack(const std::vector<Mat>& parts, FieldPtr f, size_t cols);
  static Mat kron(const Mat& a, const Mat& b);

 private:
  friend struct MatAccess;
  FieldPtr f_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<uint32_t> ff_;
  std::vector<mpq_class> qq_;
};

struct Rref {
  Mat rows;                   // nonzero rows of the reduced echelon form
  std::vector<size_t> pivots;  // pivot column of each row
};

size_t rank(const Mat& m);
Rref rref(const Mat& m);
// Columns form a basis of the right null space (free variables set to unit
// vectors in increasing column order).
Mat kernel_basis(const Mat& m);
Scalar det(const Mat& m);
Mat inverse(const Mat& m);
// Some X with a * X = b, or nothing if the system is inconsistent.
std::optional<Mat> solve(const Mat& a, const Mat& b);
// Basis (as columns) of the column space, in reduced echelon form.
Mat col_basis(const Mat& m);
bool in_col_span(const Mat& basis_cols, const Mat& v);
// Columns spanning the intersection of two column spaces in the same ambient.
Mat col_intersection(const Mat& a, const Mat& b);

// Pinned quotient of F^n by the column span of `sub`: the complement is
// spanned by the standard vectors at non-pivot positions of the reduced
// row echelon form of sub^T.
struct Quotient {
  size_t ambient = 0;
  std::vector<size_t> pivots;      // pivot coordinates of the subspace
  std::vector<size_t> complement;  // remaining coordinates, in order
  Mat reduced;                     // rref rows of sub^T
  Mat proj;                        // (n-k) x n projection
  Mat lift;                        // n x (n-k) section of proj
};
Quotient quotient_by(const Mat& sub_cols, size_t ambient, const FieldPtr& f);

// Re-interpret a matrix over another field: Q -> F_p reduces fractions,
// F_p -> F_{p^e} embeds the prime field.
Mat change_field(const Mat& m, const FieldPtr& target);

// Every subspace of F^ambient of the given dimension, as an RREF row basis,
// in a fixed order: pivot sets in lexicographic order, then free entries
// counted as an odometer.  The callback returns false to stop early.
void for_each_subspace(const FieldPtr& f, size_t ambient, size_t dim,
                       const std::function<bool(const Mat&)>& fn);
std::vector<Mat> enumerate_subspaces(const FieldPtr& f, size_t ambient, size_t dim);
mpz_class gaussian_binomial(uint64_t q, size_t n, size_t k);

}  // namespace ks
