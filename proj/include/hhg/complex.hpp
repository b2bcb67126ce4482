#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hhg/matrix.hpp"
#include "hhg/report.hpp"

namespace hhg {

struct DegreeWindow {
  int lo = 0, hi = 0;
  DegreeWindow() = default;
  DegreeWindow(int l, int h) : lo(l), hi(h) {
    if (l > h) throw ShapeError("degree window with lo > hi");
  }
  bool contains(int n) const { return lo <= n && n <= hi; }
};

/* Degrees on which homology claims are honest: truncation at the window top
 * always costs one degree (the differential entering degree hi from above is
 * missing), and constructions state their own trusted bottom. */
struct TrustedRange {
  int lo = 0, hi = 0;
  TrustedRange() = default;
  TrustedRange(int l, int h) : lo(l), hi(h) {}
  bool contains(int n) const { return lo <= n && n <= hi; }
  TrustedRange meet(const TrustedRange& o) const {
    return TrustedRange(std::max(lo, o.lo), std::min(hi, o.hi));
  }
};

class GradedVectorSpace {
public:
  GradedVectorSpace() : field_(FieldSpec::rationals()) {}
  GradedVectorSpace(FieldSpec field, DegreeWindow window,
                    std::map<int, std::vector<std::string>> basis);

  const FieldSpec& field() const { return field_; }
  const DegreeWindow& window() const { return window_; }
  std::size_t dim(int n) const;
  const std::vector<std::string>& labels(int n) const;
  std::size_t index(int n, const std::string& label) const;  // ShapeError if absent
  bool has_label(int n, const std::string& label) const;
  const std::map<int, std::vector<std::string>>& basis() const { return basis_; }

  bool operator==(const GradedVectorSpace& o) const {
    return field_ == o.field_ && window_.lo == o.window_.lo && window_.hi == o.window_.hi &&
           basis_ == o.basis_;
  }

private:
  FieldSpec field_;
  DegreeWindow window_;
  std::map<int, std::vector<std::string>> basis_;
  std::map<int, std::map<std::string, std::size_t>> index_;
  static const std::vector<std::string> kEmpty;
};

class ChainComplex;
using ComplexPtr = std::shared_ptr<const ChainComplex>;

class ChainComplex {
public:
  /* Differentials d[n] map degree n to degree n−1; missing entries are zero.
   * d² = 0 is asserted here (AxiomError) and re-checkable via verify(). */
  ChainComplex(GradedVectorSpace space, std::map<int, Matrix> d, bool check = true);

  const GradedVectorSpace& space() const { return space_; }
  const FieldSpec& field() const { return space_.field(); }
  const DegreeWindow& window() const { return space_.window(); }
  std::size_t dim(int n) const { return space_.dim(n); }
  const std::vector<std::string>& labels(int n) const { return space_.labels(n); }
  Matrix d(int n) const;  // dim(n−1) × dim(n), zero when unset

  CheckReport verify() const;
  bool operator==(const ChainComplex& o) const { return space_ == o.space_ && d_ == o.d_; }

  static ComplexPtr make(GradedVectorSpace space, std::map<int, Matrix> d, bool check = true) {
    return std::make_shared<const ChainComplex>(std::move(space), std::move(d), check);
  }

private:
  GradedVectorSpace space_;
  std::map<int, Matrix> d_;
};

/* Ground field concentrated in degree 0 with basis label "1"; the window is
 * padded one degree on each side so degree 0 is interior to every claim. */
ComplexPtr unit_complex(const FieldSpec& f);

/* A homogeneous linear map of pure degree k between complexes: component(n)
 * maps X_n to Y_{n+k}.  No compatibility with differentials is implied. */
class GradedMap {
public:
  GradedMap() = default;
  GradedMap(ComplexPtr src, ComplexPtr tgt, int degree, std::map<int, Matrix> comp);

  const ComplexPtr& source() const { return src_; }
  const ComplexPtr& target() const { return tgt_; }
  int degree() const { return deg_; }
  Matrix component(int n) const;  // tgt.dim(n+deg) × src.dim(n), zero when unset

  GradedMap compose(const GradedMap& inner) const;  // this ∘ inner
  GradedMap operator+(const GradedMap& o) const;
  GradedMap operator-(const GradedMap& o) const;
  GradedMap scaled(const Scalar& c) const;
  bool is_zero() const;
  bool equals(const GradedMap& o) const;

  static GradedMap zero(ComplexPtr src, ComplexPtr tgt, int degree) {
    return GradedMap(std::move(src), std::move(tgt), degree, {});
  }
  static GradedMap identity(const ComplexPtr& x);
  /* d as a degree −1 graded map X → X. */
  static GradedMap differential(const ComplexPtr& x);

private:
  ComplexPtr src_, tgt_;
  int deg_ = 0;
  std::map<int, Matrix> comp_;
};

/* Degree-0 graded map commuting exactly with the differentials. */
class ChainMap {
public:
  ChainMap() = default;
  /* Verifies the chain condition (AxiomError on failure). */
  ChainMap(ComplexPtr src, ComplexPtr tgt, std::map<int, Matrix> comp);
  explicit ChainMap(GradedMap m);

  const ComplexPtr& source() const { return map_.source(); }
  const ComplexPtr& target() const { return map_.target(); }
  Matrix component(int n) const { return map_.component(n); }
  const GradedMap& graded() const { return map_; }

  ChainMap compose(const ChainMap& inner) const { return ChainMap(map_.compose(inner.graded())); }
  ChainMap operator+(const ChainMap& o) const { return ChainMap(map_ + o.map_); }
  ChainMap operator-(const ChainMap& o) const { return ChainMap(map_ - o.map_); }
  ChainMap scaled(const Scalar& c) const { return ChainMap(map_.scaled(c)); }
  bool equals(const ChainMap& o) const { return map_.equals(o.map_); }
  bool is_zero() const { return map_.is_zero(); }

  static ChainMap identity(const ComplexPtr& x) { return ChainMap(GradedMap::identity(x)); }
  static ChainMap zero(ComplexPtr src, ComplexPtr tgt) {
    return ChainMap(GradedMap::zero(std::move(src), std::move(tgt), 0));
  }

  /* The chain condition as a report instead of an exception. */
  static CheckReport chain_check(const GradedMap& m);

private:
  GradedMap map_;
};

struct ChainHomotopy {
  ChainMap f, g;     // equal source and target
  GradedMap h;       // degree +1 from source to target
  CheckReport verify() const;  // d h + h d = f − g exactly
};

struct Homology {
  std::size_t dim = 0;
  Matrix representatives;  // dim(C_n) rows, `dim` columns of cycle vectors
};

/* dim H_n = dim ker d_n − rank d_{n+1}; needs n±1 inside the window. */
Homology homology(const ChainComplex& x, int n);

/* Coordinates of cycles in the chosen homology basis (mod boundaries). */
struct HomologyBasis {
  Matrix boundaries;  // spanning set (columns of d_{n+1})
  Matrix reps;        // chosen representative cycles
  /* coords of cycle v modulo boundaries in the reps basis; ShapeError if v
   * is not a cycle of this degree. */
  Matrix reduce(const Matrix& v) const;
};
HomologyBasis homology_basis(const ChainComplex& x, int n);

struct QuasiIsoEvidence {
  int degree;
  std::size_t dim_source, dim_target, rank_induced;
};
struct QuasiIsoResult {
  bool ok = false;
  std::vector<QuasiIsoEvidence> evidence;
  TrustedRange range;
  explicit operator bool() const { return ok; }
};
/* Induced isomorphism on H_n for every n in r (exact; evidence records
 * ranks).  Throws TruncationError when r exceeds the honest margin of either
 * window. */
QuasiIsoResult is_quasi_iso(const ChainMap& f, const TrustedRange& r);

/* Induced map on H_n in the chosen bases (used by is_quasi_iso and by the
 * coinvariant comparisons). */
Matrix induced_on_homology(const ChainMap& f, int n);

/* Split short exact sequence check: i: M′→M, p: M→M″, s degreewise section
 * of p.  Passes iff p i = 0, p s = id degreewise, and im i = ker p
 * degreewise (by exact ranks).  s need not be a chain map. */
CheckReport verify_split_ses(const ChainMap& i, const ChainMap& p, const GradedMap& s);

/* Structural equality of underlying spaces (labels, field, window). */
bool same_space(const ComplexPtr& a, const ComplexPtr& b);

/* Direct sum, with labels tagged "l⊕" / "⊕r" only when they collide. */
ComplexPtr direct_sum(const ComplexPtr& a, const ComplexPtr& b);

}  // namespace hhg
