#include "hhg/matrix.hpp"

#include <string>

namespace hhg {

Matrix Matrix::identity(std::size_t n, const FieldSpec& f) {
  Matrix m(n, n, f);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, Scalar::one(f));
  return m;
}

Matrix Matrix::basis_vector(std::size_t n, std::size_t i, const FieldSpec& f) {
  Matrix m(n, 1, f);
  m.set(i, 0, Scalar::one(f));
  return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? Scalar::zero(field_) : it->second;
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
  if (i >= rows_ || j >= cols_)
    throw ShapeError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  check_field(v);
  if (v.is_zero())
    entries_.erase({i, j});
  else
    entries_[{i, j}] = v;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && entries_ == o.entries_;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix sum shape mismatch");
  if (field_ != o.field_) throw FieldMismatch("matrix sum over different fields");
  Matrix r = *this;
  for (const auto& [ij, v] : o.entries_) r.set(ij.first, ij.second, r.at(ij.first, ij.second) + v);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + o.scaled(-Scalar::one(field_)); }

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
  if (field_ != o.field_) throw FieldMismatch("matrix product over different fields");
  Matrix r(rows_, o.cols_, field_);
  // (i,k) * (k,j): iterate our entries, then row k of o via ordered map range
  for (const auto& [ik, v] : entries_) {
    auto lo = o.entries_.lower_bound({ik.second, 0});
    auto hi = o.entries_.lower_bound({ik.second + 1, 0});
    for (auto it = lo; it != hi; ++it)
      r.set(ik.first, it->first.second, r.at(ik.first, it->first.second) + v * it->second);
  }
  return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
  check_field(c);
  Matrix r(rows_, cols_, field_);
  if (c.is_zero()) return r;
  for (const auto& [ij, v] : entries_) r.set(ij.first, ij.second, v * c);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, field_);
  for (const auto& [ij, v] : entries_) r.set(ij.second, ij.first, v);
  return r;
}

Matrix Matrix::column(std::size_t j) const {
  Matrix r(rows_, 1, field_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar v = at(i, j);
    if (!v.is_zero()) r.set(i, 0, v);
  }
  return r;
}

void Matrix::set_column(std::size_t j, const Matrix& col) {
  if (col.rows() != rows_ || col.cols() != 1) throw ShapeError("set_column shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) set(i, j, col.at(i, 0));
}

Matrix Matrix::hcat(const Matrix& o) const {
  if (rows_ != o.rows_) throw ShapeError("hcat row mismatch");
  if (field_ != o.field_) throw FieldMismatch("hcat over different fields");
  Matrix r(rows_, cols_ + o.cols_, field_);
  for (const auto& [ij, v] : entries_) r.set(ij.first, ij.second, v);
  for (const auto& [ij, v] : o.entries_) r.set(ij.first, cols_ + ij.second, v);
  return r;
}

Matrix Matrix::vcat(const Matrix& o) const {
  if (cols_ != o.cols_) throw ShapeError("vcat column mismatch");
  if (field_ != o.field_) throw FieldMismatch("vcat over different fields");
  Matrix r(rows_ + o.rows_, cols_, field_);
  for (const auto& [ij, v] : entries_) r.set(ij.first, ij.second, v);
  for (const auto& [ij, v] : o.entries_) r.set(rows_ + ij.first, ij.second, v);
  return r;
}

namespace {
std::vector<std::pair<std::size_t, Scalar>> row_entries(const Matrix& m, std::size_t i) {
  std::vector<std::pair<std::size_t, Scalar>> out;
  auto lo = m.entries().lower_bound({i, 0});
  auto hi = m.entries().lower_bound({i + 1, 0});
  for (auto it = lo; it != hi; ++it) out.emplace_back(it->first.second, it->second);
  return out;
}
}  // namespace

Matrix::Echelon Matrix::echelon() const {
  Echelon e{*this, Matrix::identity(rows_, field_), {}, {}};
  std::vector<bool> row_used(rows_, false);
  for (std::size_t col = 0; col < cols_; ++col) {
    // deterministic pivot: lowest-index unused row with a nonzero entry
    std::size_t pivot = rows_;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!row_used[i] && !e.R.at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows_) continue;
    row_used[pivot] = true;
    e.pivot_cols.push_back(col);
    e.pivot_rows.push_back(pivot);
    Scalar inv = e.R.at(pivot, col).inverse();
    for (const auto& [j, v] : row_entries(e.R, pivot)) e.R.set(pivot, j, v * inv);
    for (const auto& [j, v] : row_entries(e.T, pivot)) e.T.set(pivot, j, v * inv);
    auto prow = row_entries(e.R, pivot);
    auto trow = row_entries(e.T, pivot);
    // clear the column everywhere else
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == pivot) continue;
      Scalar f = e.R.at(i, col);
      if (f.is_zero()) continue;
      for (const auto& [j, v] : prow) e.R.set(i, j, e.R.at(i, j) - f * v);
      for (const auto& [j, v] : trow) e.T.set(i, j, e.T.at(i, j) - f * v);
    }
  }
  return e;
}

std::size_t Matrix::rank() const { return echelon().pivot_cols.size(); }

Matrix Matrix::kernel_basis() const {
  Echelon e = echelon();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < cols_; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Matrix k(cols_, free_cols.size(), field_);
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    std::size_t j = free_cols[f];
    k.set(j, f, Scalar::one(field_));
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
      Scalar v = e.R.at(e.pivot_rows[r], j);
      if (!v.is_zero()) k.set(e.pivot_cols[r], f, -v);
    }
  }
  return k;
}

std::optional<Matrix> Matrix::solve(const Matrix& b) const {
  if (b.rows() != rows_) throw ShapeError("solve: rhs row mismatch");
  if (b.field() != field_) throw FieldMismatch("solve over different fields");
  Echelon e = echelon();
  Matrix tb = e.T * b;
  std::vector<bool> row_has_pivot(rows_, false);
  for (std::size_t r : e.pivot_rows) row_has_pivot[r] = true;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_has_pivot[i]) continue;
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!tb.at(i, j).is_zero()) return std::nullopt;
  }
  Matrix x(cols_, b.cols(), field_);
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
    for (std::size_t j = 0; j < b.cols(); ++j) x.set(e.pivot_cols[r], j, tb.at(e.pivot_rows[r], j));
  return x;
}

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  Echelon e = echelon();
  if (e.pivot_cols.size() != rows_) return std::nullopt;
  // full rank: R is a row permutation of the identity; undo it on T
  Matrix inv(rows_, rows_, field_);
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
    for (std::size_t j = 0; j < rows_; ++j) {
      Scalar v = e.T.at(e.pivot_rows[r], j);
      if (!v.is_zero()) inv.set(e.pivot_cols[r], j, v);
    }
  return inv;
}

std::vector<std::size_t> extend_basis_columns(const Matrix& base, const Matrix& vectors) {
  if (base.rows() != vectors.rows()) throw ShapeError("extend_basis_columns row mismatch");
  std::vector<std::size_t> chosen;
  Matrix acc = base;
  std::size_t r = acc.rank();
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    Matrix cand = acc.hcat(vectors.column(j));
    std::size_t r2 = cand.rank();
    if (r2 > r) {
      chosen.push_back(j);
      acc = cand;
      r = r2;
    }
  }
  return chosen;
}

bool in_column_space(const Matrix& span, const Matrix& v) {
  return span.solve(v).has_value();
}

}  // namespace hhg
