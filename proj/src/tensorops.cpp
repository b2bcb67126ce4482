#include "hhg/tensorops.hpp"

#include <algorithm>

namespace hhg {

namespace {
bool odd(int n) { return n % 2 != 0; }

/* Column-indexed view of a matrix for fast per-column iteration. */
std::vector<std::vector<std::pair<std::size_t, Scalar>>> columns_of(const Matrix& m) {
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols(m.cols());
  for (const auto& [ij, v] : m.entries()) cols[ij.second].emplace_back(ij.first, v);
  return cols;
}
}  // namespace

Scalar koszul_sign(const FieldSpec& f, int p, int q) {
  return (odd(p) && odd(q)) ? -Scalar::one(f) : Scalar::one(f);
}

std::string tensor_label(const std::string& a, const std::string& b) { return a + "⊗" + b; }

const std::vector<TensorLayout::Factor> TensorLayout::kNoFactors = {};

TensorLayout::TensorLayout(ComplexPtr left, ComplexPtr right, ComplexPtr product,
                           std::map<int, std::vector<Factor>> factors)
    : left_(std::move(left)), right_(std::move(right)), product_(std::move(product)),
      factors_(std::move(factors)) {
  for (const auto& [n, fs] : factors_) {
    auto& lk = lookup_[n];
    for (std::size_t c = 0; c < fs.size(); ++c) lk.emplace(std::tuple{fs[c].p, fs[c].i, fs[c].j}, c);
  }
}

const std::vector<TensorLayout::Factor>& TensorLayout::factors(int n) const {
  auto it = factors_.find(n);
  return it == factors_.end() ? kNoFactors : it->second;
}

std::optional<std::size_t> TensorLayout::find(int n, int p, std::size_t i, std::size_t j) const {
  auto it = lookup_.find(n);
  if (it == lookup_.end()) return std::nullopt;
  auto jt = it->second.find(std::tuple{p, i, j});
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::size_t TensorLayout::index(int n, int p, std::size_t i, std::size_t j) const {
  auto r = find(n, p, i, j);
  if (!r)
    throw ShapeError("no tensor factor (" + std::to_string(p) + "," + std::to_string(i) + "," +
                     std::to_string(j) + ") in degree " + std::to_string(n));
  return *r;
}

TensorLayout tensor(const ComplexPtr& x, const ComplexPtr& y, std::optional<DegreeWindow> clip) {
  if (x->field() != y->field()) throw FieldMismatch("tensor over different fields");
  const FieldSpec f = x->field();
  int lo = x->window().lo + y->window().lo;
  int hi = x->window().hi + y->window().hi;
  if (clip) {
    lo = std::max(lo, clip->lo);
    hi = std::min(hi, clip->hi);
    if (lo > hi) throw ShapeError("tensor window clipped to nothing");
  }
  DegreeWindow w(lo, hi);
  std::map<int, std::vector<std::string>> basis;
  std::map<int, std::vector<TensorLayout::Factor>> factors;
  for (int n = w.lo; n <= w.hi; ++n) {
    std::vector<std::string> ls;
    std::vector<TensorLayout::Factor> fs;
    for (int p = x->window().lo; p <= x->window().hi; ++p) {
      int q = n - p;
      if (!y->window().contains(q)) continue;
      const auto& xl = x->labels(p);
      const auto& yl = y->labels(q);
      for (std::size_t i = 0; i < xl.size(); ++i)
        for (std::size_t j = 0; j < yl.size(); ++j) {
          ls.push_back(tensor_label(xl[i], yl[j]));
          fs.push_back({p, i, j});
        }
    }
    if (!ls.empty()) {
      basis[n] = std::move(ls);
      factors[n] = std::move(fs);
    }
  }
  // Local index lookup for assembling the differential.
  std::map<int, std::map<std::tuple<int, std::size_t, std::size_t>, std::size_t>> lk;
  for (const auto& [n, fs] : factors) {
    auto& m = lk[n];
    for (std::size_t c = 0; c < fs.size(); ++c) m.emplace(std::tuple{fs[c].p, fs[c].i, fs[c].j}, c);
  }
  GradedVectorSpace space(f, w, std::move(basis));
  std::map<int, Matrix> d;
  for (int n = w.lo + 1; n <= w.hi; ++n) {
    auto fit = factors.find(n);
    if (fit == factors.end() || space.dim(n - 1) == 0) continue;
    Matrix m(space.dim(n - 1), space.dim(n), f);
    const auto& below = lk[n - 1];
    for (std::size_t c = 0; c < fit->second.size(); ++c) {
      const auto& [p, i, j] = fit->second[c];
      int q = n - p;
      Matrix dx = x->d(p);
      for (const auto& [ij, v] : dx.entries()) {
        if (ij.second != i) continue;
        auto at = below.find(std::tuple{p - 1, ij.first, j});
        if (at != below.end()) m.add_to(at->second, c, v);
      }
      Scalar sign = odd(p) ? -Scalar::one(f) : Scalar::one(f);
      Matrix dy = y->d(q);
      for (const auto& [ij, v] : dy.entries()) {
        if (ij.second != j) continue;
        auto at = below.find(std::tuple{p, i, ij.first});
        if (at != below.end()) m.add_to(at->second, c, sign * v);
      }
    }
    if (!m.is_zero()) d.emplace(n, std::move(m));
  }
  ComplexPtr product = ChainComplex::make(std::move(space), std::move(d));
  return TensorLayout(x, y, std::move(product), std::move(factors));
}

GradedMap tensor_map(const GradedMap& f, const GradedMap& g, const TensorLayout& src,
                     const TensorLayout& tgt) {
  if (!same_space(f.source(), src.left()) || !same_space(g.source(), src.right()) ||
      !same_space(f.target(), tgt.left()) || !same_space(g.target(), tgt.right()))
    throw ShapeError("tensor_map endpoints do not match the supplied layouts");
  const FieldSpec fd = f.source()->field();
  const int df = f.degree(), dg = g.degree();
  std::map<int, std::vector<std::vector<std::pair<std::size_t, Scalar>>>> fcols, gcols;
  std::map<int, Matrix> comp;
  const auto& sw = src.product()->window();
  for (int n = sw.lo; n <= sw.hi; ++n) {
    const auto& fs = src.factors(n);
    if (fs.empty()) continue;
    int m_deg = n + df + dg;
    std::size_t rows = tgt.product()->dim(m_deg);
    if (rows == 0) continue;
    Matrix m(rows, fs.size(), fd);
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& [p, i, j] = fs[c];
      int q = n - p;
      auto fit = fcols.find(p);
      if (fit == fcols.end()) fit = fcols.emplace(p, columns_of(f.component(p))).first;
      auto git = gcols.find(q);
      if (git == gcols.end()) git = gcols.emplace(q, columns_of(g.component(q))).first;
      if (i >= fit->second.size() || j >= git->second.size()) continue;
      Scalar sign = koszul_sign(fd, dg, p);
      for (const auto& [i2, cf] : fit->second[i])
        for (const auto& [j2, cg] : git->second[j]) {
          auto at = tgt.find(m_deg, p + df, i2, j2);
          if (at) m.add_to(*at, c, sign * cf * cg);
        }
    }
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return GradedMap(src.product(), tgt.product(), df + dg, std::move(comp));
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g, const TensorLayout& src,
                    const TensorLayout& tgt) {
  return ChainMap(tensor_map(f.graded(), g.graded(), src, tgt));
}

ChainMap symmetry(const TensorLayout& xy, const TensorLayout& yx) {
  if (!same_space(xy.left(), yx.right()) || !same_space(xy.right(), yx.left()))
    throw ShapeError("symmetry layouts do not match");
  const FieldSpec f = xy.product()->field();
  std::map<int, Matrix> comp;
  const auto& w = xy.product()->window();
  for (int n = w.lo; n <= w.hi; ++n) {
    const auto& fs = xy.factors(n);
    if (fs.empty() || yx.product()->dim(n) == 0) continue;
    Matrix m(yx.product()->dim(n), fs.size(), f);
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& [p, i, j] = fs[c];
      auto at = yx.find(n, n - p, j, i);
      if (at) m.set(*at, c, koszul_sign(f, p, n - p));
    }
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return ChainMap(xy.product(), yx.product(), std::move(comp));
}

ChainMap canonical_relabel(const ComplexPtr& src, const ComplexPtr& tgt) {
  if (src->field() != tgt->field()) throw FieldMismatch("relabel over different fields");
  std::map<int, Matrix> comp;
  for (int n = src->window().lo; n <= src->window().hi; ++n) {
    const auto& ls = src->labels(n);
    if (ls.empty()) continue;
    if (tgt->dim(n) != ls.size())
      throw ShapeError("relabel dimension mismatch in degree " + std::to_string(n));
    Matrix m(ls.size(), ls.size(), src->field());
    for (std::size_t c = 0; c < ls.size(); ++c)
      m.set(tgt->space().index(n, ls[c]), c, Scalar::one(src->field()));
    comp.emplace(n, std::move(m));
  }
  for (int n = tgt->window().lo; n <= tgt->window().hi; ++n)
    if (tgt->dim(n) != src->dim(n))
      throw ShapeError("relabel dimension mismatch in degree " + std::to_string(n));
  return ChainMap(src, tgt, std::move(comp));
}

namespace {
ChainMap unit_iso(const TensorLayout& t, bool unit_on_left) {
  const ComplexPtr& unit = unit_on_left ? t.left() : t.right();
  const ComplexPtr& rest = unit_on_left ? t.right() : t.left();
  if (unit->dim(0) != 1 || unit->labels(0)[0] != "1")
    throw ShapeError("unit factor must be one-dimensional in degree 0 with label '1'");
  for (int n = unit->window().lo; n <= unit->window().hi; ++n)
    if (n != 0 && unit->dim(n) != 0) throw ShapeError("unit factor must vanish outside degree 0");
  std::map<int, Matrix> comp;
  for (int n = t.product()->window().lo; n <= t.product()->window().hi; ++n) {
    const auto& fs = t.factors(n);
    if (fs.empty() || rest->dim(n) == 0) continue;
    Matrix m(rest->dim(n), fs.size(), t.product()->field());
    for (std::size_t c = 0; c < fs.size(); ++c)
      m.set(unit_on_left ? fs[c].j : fs[c].i, c, Scalar::one(t.product()->field()));
    comp.emplace(n, std::move(m));
  }
  return ChainMap(t.product(), rest, std::move(comp));
}
}  // namespace

ChainMap unit_iso_left(const TensorLayout& t) { return unit_iso(t, true); }
ChainMap unit_iso_right(const TensorLayout& t) { return unit_iso(t, false); }

GradedVectorSpace tensor_algebra_trunc(const GradedVectorSpace& v, const DegreeWindow& w) {
  for (const auto& [n, ls] : v.basis())
    if (n <= 0 && !ls.empty())
      throw NonConnectedError("tensor algebra needs generators in degrees >= 1, found degree " +
                              std::to_string(n));
  // words[n] = labels of all words of total degree n, built by first letter.
  std::vector<std::vector<std::string>> words(static_cast<std::size_t>(std::max(w.hi, 0)) + 1);
  if (w.hi >= 0) words[0] = {"1"};
  for (int n = 1; n <= w.hi; ++n) {
    for (int d = 1; d <= n; ++d)
      for (const auto& letter : v.labels(d))
        for (const auto& rest : words[static_cast<std::size_t>(n - d)])
          words[static_cast<std::size_t>(n)].push_back(rest == "1" ? letter : letter + "|" + rest);
  }
  std::map<int, std::vector<std::string>> basis;
  for (int n = std::max(w.lo, 0); n <= w.hi; ++n)
    if (!words[static_cast<std::size_t>(n)].empty()) basis[n] = words[static_cast<std::size_t>(n)];
  return GradedVectorSpace(v.field(), w, std::move(basis));
}

std::vector<std::string> split_word(const std::string& word) {
  if (word == "1") return {};
  std::vector<std::string> letters;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = word.find('|', start);
    if (bar == std::string::npos) {
      letters.push_back(word.substr(start));
      break;
    }
    letters.push_back(word.substr(start, bar - start));
    start = bar + 1;
  }
  return letters;
}

std::string join_word(const std::vector<std::string>& letters) {
  if (letters.empty()) return "1";
  std::string out = letters[0];
  for (std::size_t i = 1; i < letters.size(); ++i) out += "|" + letters[i];
  return out;
}

std::string Desuspension::label(const std::string& v) { return "s⁻¹" + v; }

Desuspension Desuspension::of(const GradedVectorSpace& v) {
  DegreeWindow w(v.window().lo - 1, v.window().hi - 1);
  std::map<int, std::vector<std::string>> basis;
  for (int n = w.lo; n <= w.hi; ++n) {
    const auto& ls = v.labels(n + 1);
    if (ls.empty()) continue;
    std::vector<std::string> shifted;
    for (const auto& l : ls) shifted.push_back(label(l));
    basis[n] = std::move(shifted);
  }
  return Desuspension{v, GradedVectorSpace(v.field(), w, std::move(basis))};
}

}  // namespace hhg
