#include "hhg/subquotient.hpp"

#include <algorithm>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

Matrix span_at(const std::map<int, Matrix>& span, const ComplexPtr& x, int n) {
  auto it = span.find(n);
  if (it == span.end()) return Matrix(x->dim(n), 0, x->field());
  if (it->second.rows() != x->dim(n))
    throw ShapeError("span at degree " + std::to_string(n) + " has " +
                     std::to_string(it->second.rows()) + " rows, complex has dimension " +
                     std::to_string(x->dim(n)));
  return it->second;
}

/* Independent subset of the span columns, ascending. */
Matrix independent_columns(const Matrix& span) {
  Matrix none(span.rows(), 0, span.field());
  std::vector<std::size_t> keep = extend_basis_columns(none, span);
  Matrix out(span.rows(), keep.size(), span.field());
  for (std::size_t c = 0; c < keep.size(); ++c) out.set_column(c, span.column(keep[c]));
  return out;
}

/* Label for a chosen basis column: the representative's label when the
 * column is a coordinate vector (entry 1 at one row), synthetic otherwise. */
std::string column_label(const ComplexPtr& x, int n, const Matrix& col, std::size_t k,
                         std::vector<std::string>& used) {
  std::string name;
  if (col.entries().size() == 1) {
    const auto& [ij, v] = *col.entries().begin();
    if (v.is_one()) name = x->labels(n)[ij.first];
  }
  if (name.empty() || std::count(used.begin(), used.end(), name) > 0)
    name = "~" + std::to_string(n) + "." + std::to_string(k);
  used.push_back(name);
  return name;
}

}  // namespace

SubComplex subcomplex_from_span(const ComplexPtr& x, const std::map<int, Matrix>& span) {
  const FieldSpec f = x->field();
  std::map<int, Matrix> inc, retr;
  std::map<int, std::vector<std::string>> basis;
  for (int n = x->window().lo; n <= x->window().hi; ++n) {
    Matrix cols = independent_columns(span_at(span, x, n));
    if (cols.cols() == 0) continue;
    std::vector<std::string> used;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < cols.cols(); ++k)
      labels.push_back(column_label(x, n, cols.column(k), k, used));
    basis.emplace(n, std::move(labels));
    // retraction: sub-coordinates of the projection along a coordinate complement
    std::vector<std::size_t> comp = extend_basis_columns(cols, Matrix::identity(x->dim(n), f));
    Matrix m = cols;
    for (std::size_t c : comp) m = m.hcat(Matrix::basis_vector(x->dim(n), c, f));
    Matrix minv = *m.inverse();
    Matrix r(cols.cols(), x->dim(n), f);
    for (const auto& [ij, v] : minv.entries())
      if (ij.first < cols.cols()) r.set(ij.first, ij.second, v);
    inc.emplace(n, std::move(cols));
    retr.emplace(n, std::move(r));
  }
  std::map<int, Matrix> d_sub;
  for (const auto& [n, cols] : inc) {
    Matrix dcols = x->d(n) * cols;
    auto down = inc.find(n - 1);
    Matrix base = down == inc.end() ? Matrix(x->dim(n - 1), 0, f) : down->second;
    auto sol = base.solve(dcols);
    if (!sol)
      throw ShapeError("span is not closed under the differential at degree " +
                       std::to_string(n));
    if (!sol->is_zero()) d_sub.emplace(n, *sol);
  }
  ComplexPtr sub =
      ChainComplex::make(GradedVectorSpace(f, x->window(), std::move(basis)), std::move(d_sub));
  std::map<int, Matrix> inc_comp(inc.begin(), inc.end());
  ChainMap inclusion(sub, x, std::move(inc_comp));
  GradedMap retraction(x, sub, 0, std::move(retr));
  return SubComplex{x, sub, std::move(inclusion), std::move(retraction)};
}

QuotientComplex quotient_by_span(const ComplexPtr& x, const std::map<int, Matrix>& span) {
  const FieldSpec f = x->field();
  std::map<int, Matrix> kill, proj, sect;
  std::map<int, std::vector<std::string>> basis;
  for (int n = x->window().lo; n <= x->window().hi; ++n) {
    Matrix rel = independent_columns(span_at(span, x, n));
    std::size_t dim = x->dim(n);
    if (dim == 0) continue;
    std::vector<std::size_t> comp = extend_basis_columns(rel, Matrix::identity(dim, f));
    std::vector<std::string> labels;
    for (std::size_t c : comp) labels.push_back(x->labels(n)[c]);
    if (!labels.empty()) basis.emplace(n, std::move(labels));
    Matrix m = rel;
    Matrix s(dim, comp.size(), f);
    for (std::size_t k = 0; k < comp.size(); ++k) {
      m = m.hcat(Matrix::basis_vector(dim, comp[k], f));
      s.set(comp[k], k, Scalar::one(f));
    }
    Matrix minv = *m.inverse();
    Matrix p(comp.size(), dim, f);
    for (const auto& [ij, v] : minv.entries())
      if (ij.first >= rel.cols()) p.set(ij.first - rel.cols(), ij.second, v);
    if (rel.cols() > 0) kill.emplace(n, std::move(rel));
    if (comp.size() > 0) {
      proj.emplace(n, std::move(p));
      sect.emplace(n, std::move(s));
    }
  }
  // relations closed under d?
  for (const auto& [n, rel] : kill) {
    Matrix drel = x->d(n) * rel;
    auto down = kill.find(n - 1);
    Matrix base = down == kill.end() ? Matrix(x->dim(n - 1), 0, f) : down->second;
    for (std::size_t c = 0; c < drel.cols(); ++c)
      if (!in_column_space(base, drel.column(c)))
        throw ShapeError("relations are not closed under the differential at degree " +
                         std::to_string(n));
  }
  std::map<int, Matrix> d_q;
  for (int n = x->window().lo + 1; n <= x->window().hi; ++n) {
    auto pit = proj.find(n - 1);
    auto sit = sect.find(n);
    if (pit == proj.end() || sit == sect.end()) continue;
    Matrix dq = pit->second * (x->d(n) * sit->second);
    if (!dq.is_zero()) d_q.emplace(n, std::move(dq));
  }
  ComplexPtr quot =
      ChainComplex::make(GradedVectorSpace(f, x->window(), std::move(basis)), std::move(d_q));
  ChainMap projection(x, quot, std::move(proj));
  GradedMap section(quot, x, 0, std::move(sect));
  return QuotientComplex{x, quot, std::move(projection), std::move(section)};
}

SubComplex equalizer(const ChainMap& f, const ChainMap& g) {
  if (!same_space(f.source(), g.source()) || !same_space(f.target(), g.target()))
    throw ShapeError("equalizer of maps with different endpoints");
  ChainMap h = f - g;
  std::map<int, Matrix> span;
  const auto& x = f.source();
  for (int n = x->window().lo; n <= x->window().hi; ++n) {
    if (x->dim(n) == 0) continue;
    Matrix comp = h.component(n);
    span.emplace(n, comp.kernel_basis());
  }
  return subcomplex_from_span(x, span);
}

QuotientComplex coequalizer(const ChainMap& f, const ChainMap& g) {
  if (!same_space(f.source(), g.source()) || !same_space(f.target(), g.target()))
    throw ShapeError("coequalizer of maps with different endpoints");
  ChainMap h = f - g;
  std::map<int, Matrix> span;
  const auto& y = f.target();
  for (int n = f.source()->window().lo; n <= f.source()->window().hi; ++n) {
    Matrix comp = h.component(n);
    if (comp.rows() == 0 || comp.cols() == 0) continue;
    span.emplace(n, std::move(comp));
  }
  return quotient_by_span(y, span);
}

ChainMap factor_through(const QuotientComplex& q, const ChainMap& t) {
  if (!same_space(t.source(), q.total)) throw ShapeError("map does not start at the total complex");
  GradedMap induced = t.graded().compose(q.section);
  if (!induced.compose(q.projection.graded()).equals(t.graded()))
    throw ShapeError("map does not kill the relations of the quotient");
  return ChainMap(std::move(induced));
}

ChainMap corestrict(const SubComplex& s, const ChainMap& t) {
  if (!same_space(t.target(), s.total)) throw ShapeError("map does not land in the total complex");
  GradedMap induced = s.retraction.compose(t.graded());
  if (!s.inclusion.graded().compose(induced).equals(t.graded()))
    throw ShapeError("map does not land inside the subcomplex");
  return ChainMap(std::move(induced));
}

ChainMap descend(const QuotientComplex& qx, const QuotientComplex& qy, const ChainMap& t) {
  return factor_through(qx, qy.projection.compose(t));
}

ChainMap restrict_between(const SubComplex& sx, const SubComplex& sy, const ChainMap& t) {
  return corestrict(sy, t.compose(sx.inclusion));
}

}  // namespace hhg
