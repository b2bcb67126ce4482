#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hhg/field.hpp"

namespace hhg {

/* Sparse exact matrix over a FieldSpec.  Entries are stored row-major with
 * no explicit zeros; all stored scalars share the matrix field.  Maps act on
 * column vectors by left multiplication (rows = target, cols = source). */
class Matrix {
public:
  Matrix() : field_(FieldSpec::rationals()) {}
  Matrix(std::size_t rows, std::size_t cols, const FieldSpec& f)
      : rows_(rows), cols_(cols), field_(f) {}

  static Matrix identity(std::size_t n, const FieldSpec& f);
  static Matrix zero(std::size_t rows, std::size_t cols, const FieldSpec& f) {
    return Matrix(rows, cols, f);
  }
  static Matrix basis_vector(std::size_t n, std::size_t i, const FieldSpec& f);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }

  Scalar at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Scalar& v);
  void add_to(std::size_t i, std::size_t j, const Scalar& v) { set(i, j, at(i, j) + v); }

  bool is_zero() const { return entries_.empty(); }
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;  // composition f*g = "f after g"
  Matrix scaled(const Scalar& c) const;
  Matrix operator-() const { return scaled(-Scalar::one(field_)); }
  Matrix transpose() const;

  Matrix column(std::size_t j) const;
  void set_column(std::size_t j, const Matrix& col);
  Matrix hcat(const Matrix& o) const;  // [this | o]
  Matrix vcat(const Matrix& o) const;  // [this ; o]

  /* Row-reduced echelon data computed with the deterministic pivot order:
   * columns are scanned ascending and the pivot is the lowest-index row not
   * yet used.  T is invertible with T*A = R. */
  struct Echelon;
  Echelon echelon() const;

  std::size_t rank() const;
  /* Columns form the canonical kernel basis (one per free column, ascending,
   * with unit coordinate at its free column). */
  Matrix kernel_basis() const;
  /* Least structural solution of A X = B (free variables zero), or nullopt. */
  std::optional<Matrix> solve(const Matrix& b) const;
  std::optional<Matrix> inverse() const;
  bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

  const std::map<std::pair<std::size_t, std::size_t>, Scalar>& entries() const { return entries_; }

private:
  void check_field(const Scalar& v) const {
    if (v.field() != field_) throw FieldMismatch("matrix over " + field_.str() + ", entry over " + v.field().str());
  }
  std::size_t rows_ = 0, cols_ = 0;
  FieldSpec field_;
  std::map<std::pair<std::size_t, std::size_t>, Scalar> entries_;
};

struct Matrix::Echelon {
  Matrix R;
  Matrix T;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> pivot_rows;  // aligned with pivot_cols
};

/* Columns of `vectors` that extend the column space of `base` to the column
 * space of [base | vectors], chosen greedily in ascending column order.
 * Used to pick homology representatives (base = boundaries, vectors =
 * cycles) and quotient-basis representatives. */
std::vector<std::size_t> extend_basis_columns(const Matrix& base, const Matrix& vectors);

/* Does v lie in the column space of span? */
bool in_column_space(const Matrix& span, const Matrix& v);

}  // namespace hhg
