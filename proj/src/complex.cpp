#include "hhg/complex.hpp"

#include <algorithm>
#include <set>

namespace hhg {

const std::vector<std::string> GradedVectorSpace::kEmpty = {};

GradedVectorSpace::GradedVectorSpace(FieldSpec field, DegreeWindow window,
                                     std::map<int, std::vector<std::string>> basis)
    : field_(field), window_(window), basis_(std::move(basis)) {
  for (auto it = basis_.begin(); it != basis_.end();) {
    if (it->second.empty()) {
      it = basis_.erase(it);
      continue;
    }
    if (!window_.contains(it->first))
      throw ShapeError("basis in degree " + std::to_string(it->first) + " outside window [" +
                       std::to_string(window_.lo) + "," + std::to_string(window_.hi) + "]");
    std::map<std::string, std::size_t>& idx = index_[it->first];
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const std::string& label = it->second[i];
      if (label.empty()) throw ShapeError("empty basis label");
      if (!idx.emplace(label, i).second)
        throw ShapeError("duplicate basis label '" + label + "' in degree " +
                         std::to_string(it->first));
    }
    ++it;
  }
}

std::size_t GradedVectorSpace::dim(int n) const {
  auto it = basis_.find(n);
  return it == basis_.end() ? 0 : it->second.size();
}

const std::vector<std::string>& GradedVectorSpace::labels(int n) const {
  auto it = basis_.find(n);
  return it == basis_.end() ? kEmpty : it->second;
}

std::size_t GradedVectorSpace::index(int n, const std::string& label) const {
  auto it = index_.find(n);
  if (it != index_.end()) {
    auto jt = it->second.find(label);
    if (jt != it->second.end()) return jt->second;
  }
  throw ShapeError("no basis label '" + label + "' in degree " + std::to_string(n));
}

bool GradedVectorSpace::has_label(int n, const std::string& label) const {
  auto it = index_.find(n);
  return it != index_.end() && it->second.count(label) > 0;
}

ChainComplex::ChainComplex(GradedVectorSpace space, std::map<int, Matrix> d, bool check)
    : space_(std::move(space)), d_(std::move(d)) {
  for (auto it = d_.begin(); it != d_.end();) {
    int n = it->first;
    const Matrix& m = it->second;
    if (m.field() != space_.field()) throw FieldMismatch("differential field differs from space field");
    if (m.rows() != space_.dim(n - 1) || m.cols() != space_.dim(n))
      throw ShapeError("differential in degree " + std::to_string(n) + " has shape " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                       std::to_string(space_.dim(n - 1)) + "x" + std::to_string(space_.dim(n)));
    if (m.is_zero())
      it = d_.erase(it);
    else
      ++it;
  }
  if (check) {
    CheckReport r = verify();
    if (!r.passed()) throw AxiomError("d^2 != 0: " + r.failures.front());
  }
}

Matrix ChainComplex::d(int n) const {
  auto it = d_.find(n);
  if (it != d_.end()) return it->second;
  return Matrix::zero(space_.dim(n - 1), space_.dim(n), space_.field());
}

CheckReport ChainComplex::verify() const {
  CheckReport r;
  for (int n = window().lo; n <= window().hi; ++n) {
    if (dim(n) == 0) continue;
    Matrix sq = d(n - 1) * d(n);
    if (!sq.is_zero()) {
      std::set<std::size_t> bad_cols;
      for (const auto& [ij, v] : sq.entries()) bad_cols.insert(ij.second);
      std::string labels;
      for (std::size_t c : bad_cols) labels += (labels.empty() ? "" : ", ") + this->labels(n)[c];
      r.fail("d^2 != 0 at degree " + std::to_string(n) + " on basis: " + labels);
    }
  }
  return r;
}

ComplexPtr unit_complex(const FieldSpec& f) {
  return ChainComplex::make(GradedVectorSpace(f, DegreeWindow(-1, 1), {{0, {"1"}}}), {});
}

GradedMap::GradedMap(ComplexPtr src, ComplexPtr tgt, int degree, std::map<int, Matrix> comp)
    : src_(std::move(src)), tgt_(std::move(tgt)), deg_(degree), comp_(std::move(comp)) {
  if (!src_ || !tgt_) throw ShapeError("graded map with null endpoint");
  if (src_->field() != tgt_->field()) throw FieldMismatch("graded map between different fields");
  for (auto it = comp_.begin(); it != comp_.end();) {
    int n = it->first;
    const Matrix& m = it->second;
    if (m.field() != src_->field()) throw FieldMismatch("component field differs");
    if (m.rows() != tgt_->dim(n + deg_) || m.cols() != src_->dim(n))
      throw ShapeError("component at degree " + std::to_string(n) + " has shape " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                       std::to_string(tgt_->dim(n + deg_)) + "x" + std::to_string(src_->dim(n)));
    if (m.is_zero())
      it = comp_.erase(it);
    else
      ++it;
  }
}

Matrix GradedMap::component(int n) const {
  auto it = comp_.find(n);
  if (it != comp_.end()) return it->second;
  return Matrix::zero(tgt_->dim(n + deg_), src_->dim(n), src_->field());
}

GradedMap GradedMap::compose(const GradedMap& inner) const {
  if (!same_space(inner.target(), source()))
    throw ShapeError("composition through mismatched spaces");
  std::map<int, Matrix> comp;
  for (int n = inner.source()->window().lo; n <= inner.source()->window().hi; ++n) {
    if (inner.source()->dim(n) == 0) continue;
    Matrix m = component(n + inner.degree()) * inner.component(n);
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return GradedMap(inner.source(), target(), degree() + inner.degree(), std::move(comp));
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  if (!same_space(source(), o.source()) || !same_space(target(), o.target()) || degree() != o.degree())
    throw ShapeError("sum of incompatible graded maps");
  std::map<int, Matrix> comp;
  std::set<int> keys;
  for (const auto& [n, m] : comp_) keys.insert(n);
  for (const auto& [n, m] : o.comp_) keys.insert(n);
  for (int n : keys) {
    Matrix m = component(n) + o.component(n);
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return GradedMap(source(), target(), degree(), std::move(comp));
}

GradedMap GradedMap::operator-(const GradedMap& o) const {
  return *this + o.scaled(-Scalar::one(source()->field()));
}

GradedMap GradedMap::scaled(const Scalar& c) const {
  std::map<int, Matrix> comp;
  for (const auto& [n, m] : comp_) {
    Matrix s = m.scaled(c);
    if (!s.is_zero()) comp.emplace(n, std::move(s));
  }
  return GradedMap(source(), target(), degree(), std::move(comp));
}

bool GradedMap::is_zero() const { return comp_.empty(); }

bool GradedMap::equals(const GradedMap& o) const {
  if (!same_space(source(), o.source()) || !same_space(target(), o.target()) || degree() != o.degree())
    return false;
  return (*this - o).is_zero();
}

GradedMap GradedMap::identity(const ComplexPtr& x) {
  std::map<int, Matrix> comp;
  for (const auto& [n, labels] : x->space().basis())
    comp.emplace(n, Matrix::identity(labels.size(), x->field()));
  return GradedMap(x, x, 0, std::move(comp));
}

GradedMap GradedMap::differential(const ComplexPtr& x) {
  std::map<int, Matrix> comp;
  for (int n = x->window().lo; n <= x->window().hi; ++n) {
    Matrix m = x->d(n);
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return GradedMap(x, x, -1, std::move(comp));
}

ChainMap::ChainMap(ComplexPtr src, ComplexPtr tgt, std::map<int, Matrix> comp)
    : map_(std::move(src), std::move(tgt), 0, std::move(comp)) {
  CheckReport r = chain_check(map_);
  if (!r.passed()) throw AxiomError("not a chain map: " + r.failures.front());
}

ChainMap::ChainMap(GradedMap m) : map_(std::move(m)) {
  CheckReport r = chain_check(map_);
  if (!r.passed()) throw AxiomError("not a chain map: " + r.failures.front());
}

CheckReport ChainMap::chain_check(const GradedMap& m) {
  CheckReport r;
  if (m.degree() != 0) {
    r.fail("degree " + std::to_string(m.degree()) + ", expected 0");
    return r;
  }
  const auto& src = m.source();
  const auto& tgt = m.target();
  for (int n = src->window().lo; n <= src->window().hi; ++n) {
    Matrix lhs = tgt->d(n) * m.component(n);
    Matrix rhs = m.component(n - 1) * src->d(n);
    if (lhs != rhs) r.fail("d f != f d at degree " + std::to_string(n));
  }
  return r;
}

CheckReport ChainHomotopy::verify() const {
  CheckReport r;
  if (!same_space(f.source(), g.source()) || !same_space(f.target(), g.target()))
    throw ShapeError("homotopy endpoints disagree");
  if (h.degree() != 1) throw ShapeError("homotopy must have degree +1");
  const auto& src = f.source();
  const auto& tgt = f.target();
  for (int n = src->window().lo; n <= src->window().hi; ++n) {
    Matrix lhs = tgt->d(n + 1) * h.component(n) + h.component(n - 1) * src->d(n);
    Matrix rhs = f.component(n) - g.component(n);
    if (lhs != rhs) r.fail("dh + hd != f - g at degree " + std::to_string(n));
  }
  return r;
}

Homology homology(const ChainComplex& x, int n) {
  const DegreeWindow& w = x.window();
  if (n - 1 < w.lo || n + 1 > w.hi)
    throw TruncationError("homology at degree " + std::to_string(n) +
                          " needs both neighbours inside window [" + std::to_string(w.lo) + "," +
                          std::to_string(w.hi) + "]");
  Matrix cycles = x.d(n).kernel_basis();
  Matrix bound = x.d(n + 1);
  auto chosen = extend_basis_columns(bound, cycles);
  Matrix reps(x.dim(n), chosen.size(), x.field());
  for (std::size_t j = 0; j < chosen.size(); ++j) reps.set_column(j, cycles.column(chosen[j]));
  return Homology{chosen.size(), std::move(reps)};
}

HomologyBasis homology_basis(const ChainComplex& x, int n) {
  Homology h = homology(x, n);
  return HomologyBasis{x.d(n + 1), std::move(h.representatives)};
}

Matrix HomologyBasis::reduce(const Matrix& v) const {
  Matrix span = boundaries.hcat(reps);
  auto sol = span.solve(v);
  if (!sol) throw ShapeError("vector is not a cycle of this degree (not in boundary+rep span)");
  Matrix coords(reps.cols(), v.cols(), v.field());
  for (std::size_t i = 0; i < reps.cols(); ++i)
    for (std::size_t j = 0; j < v.cols(); ++j)
      coords.set(i, j, sol->at(boundaries.cols() + i, j));
  return coords;
}

Matrix induced_on_homology(const ChainMap& f, int n) {
  HomologyBasis src = homology_basis(*f.source(), n);
  HomologyBasis tgt = homology_basis(*f.target(), n);
  Matrix induced(tgt.reps.cols(), src.reps.cols(), f.source()->field());
  if (src.reps.cols() == 0) return induced;
  Matrix mapped = f.component(n) * src.reps;
  for (std::size_t j = 0; j < src.reps.cols(); ++j)
    induced.set_column(j, tgt.reduce(mapped.column(j)));
  return induced;
}

QuasiIsoResult is_quasi_iso(const ChainMap& f, const TrustedRange& r) {
  const DegreeWindow& ws = f.source()->window();
  const DegreeWindow& wt = f.target()->window();
  if (r.lo - 1 < std::max(ws.lo, wt.lo) || r.hi + 1 > std::min(ws.hi, wt.hi))
    throw TruncationError("requested range [" + std::to_string(r.lo) + "," + std::to_string(r.hi) +
                          "] exceeds the honest margin of the windows");
  QuasiIsoResult res;
  res.ok = true;
  res.range = r;
  for (int n = r.lo; n <= r.hi; ++n) {
    Homology hs = homology(*f.source(), n);
    Homology ht = homology(*f.target(), n);
    Matrix induced = induced_on_homology(f, n);
    std::size_t rk = induced.rank();
    res.evidence.push_back({n, hs.dim, ht.dim, rk});
    if (hs.dim != ht.dim || rk != hs.dim) res.ok = false;
  }
  return res;
}

CheckReport verify_split_ses(const ChainMap& i, const ChainMap& p, const GradedMap& s) {
  CheckReport r;
  if (!same_space(i.target(), p.source())) throw ShapeError("i and p do not compose");
  if (!same_space(s.source(), p.target()) || !same_space(s.target(), p.source()) || s.degree() != 0)
    throw ShapeError("splitting must be a degree-0 map from the quotient to the middle");
  const auto& mid = p.source();
  for (int n = mid->window().lo; n <= mid->window().hi; ++n) {
    Matrix pi = p.component(n) * i.component(n);
    if (!pi.is_zero()) r.fail("p i != 0 at degree " + std::to_string(n));
    Matrix ps = p.component(n) * s.component(n);
    if (ps != Matrix::identity(p.target()->dim(n), mid->field()))
      r.fail("p s != id at degree " + std::to_string(n));
    std::size_t ri = i.component(n).rank();
    std::size_t rp = p.component(n).rank();
    if (ri != i.source()->dim(n)) r.fail("i not injective at degree " + std::to_string(n));
    if (ri + rp != mid->dim(n))
      r.fail("im i != ker p at degree " + std::to_string(n) + " (rank i = " + std::to_string(ri) +
             ", rank p = " + std::to_string(rp) + ", dim = " + std::to_string(mid->dim(n)) + ")");
  }
  return r;
}

bool same_space(const ComplexPtr& a, const ComplexPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

ComplexPtr direct_sum(const ComplexPtr& a, const ComplexPtr& b) {
  if (a->field() != b->field()) throw FieldMismatch("direct sum over different fields");
  DegreeWindow w(std::min(a->window().lo, b->window().lo), std::max(a->window().hi, b->window().hi));
  std::map<int, std::vector<std::string>> basis;
  for (int n = w.lo; n <= w.hi; ++n) {
    std::vector<std::string> ls;
    for (const auto& l : a->labels(n)) ls.push_back("L:" + l);
    for (const auto& l : b->labels(n)) ls.push_back("R:" + l);
    if (!ls.empty()) basis[n] = std::move(ls);
  }
  std::map<int, Matrix> d;
  for (int n = w.lo; n <= w.hi; ++n) {
    std::size_t rows = a->dim(n - 1) + b->dim(n - 1);
    std::size_t cols = a->dim(n) + b->dim(n);
    if (rows == 0 || cols == 0) continue;
    Matrix m(rows, cols, a->field());
    Matrix da = a->d(n);
    Matrix db = b->d(n);
    for (const auto& [ij, v] : da.entries()) m.set(ij.first, ij.second, v);
    for (const auto& [ij, v] : db.entries())
      m.set(a->dim(n - 1) + ij.first, a->dim(n) + ij.second, v);
    if (!m.is_zero()) d.emplace(n, std::move(m));
  }
  return ChainComplex::make(GradedVectorSpace(a->field(), w, std::move(basis)), std::move(d));
}

}  // namespace hhg
