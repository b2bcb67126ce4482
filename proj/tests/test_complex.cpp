#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "hhg/complex.hpp"

using namespace hhg;

namespace {

Matrix from_rows(const FieldSpec& f, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows[0].size();
  Matrix m(r, c, f);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, Scalar::from_int(f, rows[i][j]));
  return m;
}

// The acyclic two-term complex: base field in degrees 1 and 0, d = identity.
ComplexPtr disk(const FieldSpec& f) {
  GradedVectorSpace sp(f, DegreeWindow(-1, 2), {{1, {"top"}}, {0, {"bot"}}});
  return ChainComplex::make(std::move(sp), {{1, Matrix::identity(1, f)}});
}

struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 33;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// A complex assembled from spheres (one generator, zero differential) and
// disks (two generators, identity differential): per-degree homology equals
// the sphere count by construction, giving an oracle independent of the
// elimination code under test.
struct SphereDiskModel {
  ComplexPtr complex;
  std::map<int, std::size_t> sphere_count;
};

SphereDiskModel random_sphere_disk(const FieldSpec& f, Lcg& rng, int lo_deg, int hi_deg) {
  std::map<int, std::size_t> spheres, tops;  // tops[n] = disks with top cell in degree n
  for (int n = lo_deg; n <= hi_deg; ++n) {
    spheres[n] = static_cast<std::size_t>(rng.range(0, 2));
    if (n > lo_deg) tops[n] = static_cast<std::size_t>(rng.range(0, 2));
  }
  std::map<int, std::vector<std::string>> basis;
  for (int n = lo_deg; n <= hi_deg; ++n) {
    std::vector<std::string> ls;
    for (std::size_t i = 0; i < spheres[n]; ++i) ls.push_back("s" + std::to_string(n) + "_" + std::to_string(i));
    for (std::size_t i = 0; i < tops[n]; ++i) ls.push_back("t" + std::to_string(n) + "_" + std::to_string(i));
    std::size_t below = (n + 1 <= hi_deg) ? tops[n + 1] : 0;
    for (std::size_t i = 0; i < below; ++i) ls.push_back("b" + std::to_string(n + 1) + "_" + std::to_string(i));
    if (!ls.empty()) basis[n] = std::move(ls);
  }
  GradedVectorSpace sp(f, DegreeWindow(lo_deg - 1, hi_deg + 1), std::move(basis));
  std::map<int, Matrix> d;
  for (int n = lo_deg + 1; n <= hi_deg; ++n) {
    if (tops[n] == 0 || sp.dim(n) == 0 || sp.dim(n - 1) == 0) continue;
    Matrix m(sp.dim(n - 1), sp.dim(n), f);
    for (std::size_t i = 0; i < tops[n]; ++i) {
      std::size_t col = sp.index(n, "t" + std::to_string(n) + "_" + std::to_string(i));
      std::size_t row = sp.index(n - 1, "b" + std::to_string(n) + "_" + std::to_string(i));
      m.set(row, col, Scalar::one(f));
    }
    d.emplace(n, std::move(m));
  }
  return {ChainComplex::make(std::move(sp), std::move(d)), std::move(spheres)};
}

Matrix random_invertible(const FieldSpec& f, std::size_t n, Lcg& rng) {
  Matrix p = Matrix::identity(n, f);
  if (n < 2) return p;
  for (int k = 0; k < 12; ++k) {
    std::size_t i = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n) - 1));
    std::size_t j = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(n) - 1));
    if (i == j) continue;
    Scalar c = Scalar::from_int(f, rng.range(-3, 3));
    for (std::size_t col = 0; col < n; ++col) p.add_to(i, col, c * p.at(j, col));
  }
  return p;
}

const std::vector<FieldSpec> kFields = {FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(5)};

}  // namespace

TEST_CASE("graded vector space invariants") {
  FieldSpec q = FieldSpec::rationals();
  CHECK_THROWS_AS(GradedVectorSpace(q, DegreeWindow(0, 2), {{3, {"x"}}}), ShapeError);
  CHECK_THROWS_AS(GradedVectorSpace(q, DegreeWindow(0, 2), {{1, {"x", "x"}}}), ShapeError);
  CHECK_THROWS_AS(DegreeWindow(2, 0), ShapeError);
  GradedVectorSpace sp(q, DegreeWindow(0, 3), {{1, {"a", "b"}}, {2, {"c"}}});
  CHECK(sp.dim(1) == 2);
  CHECK(sp.dim(0) == 0);
  CHECK(sp.index(1, "b") == 1);
  CHECK(sp.has_label(2, "c"));
  CHECK_FALSE(sp.has_label(2, "a"));
  CHECK_THROWS_AS(sp.index(2, "a"), ShapeError);
}

TEST_CASE("verify_complex: zero differential and the two-term disk pass") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    GradedVectorSpace sp(f, DegreeWindow(0, 4), {{2, {"x", "y", "z"}}});
    auto zero_d = ChainComplex::make(std::move(sp), {});
    CHECK(zero_d->verify().passed());
    CHECK(disk(f)->verify().passed());
  }
}

TEST_CASE("verify_complex: injected d^2 = identity fails and reports the degree") {
  FieldSpec q = FieldSpec::rationals();
  GradedVectorSpace sp(q, DegreeWindow(0, 3), {{0, {"u"}}, {1, {"v"}}, {2, {"w"}}});
  std::map<int, Matrix> d;
  d.emplace(1, Matrix::identity(1, q));
  d.emplace(2, Matrix::identity(1, q));  // d_1 d_2 = identity != 0
  CHECK_THROWS_AS(ChainComplex(GradedVectorSpace(sp), std::map<int, Matrix>(d)), AxiomError);
  ChainComplex bad(std::move(sp), std::move(d), /*check=*/false);
  CheckReport r = bad.verify();
  REQUIRE_FALSE(r.passed());
  CHECK(r.failures.front().find("degree 2") != std::string::npos);
  CHECK(r.failures.front().find("w") != std::string::npos);
}

TEST_CASE("chain complex construction rejects malformed differentials") {
  FieldSpec q = FieldSpec::rationals();
  GradedVectorSpace sp(q, DegreeWindow(0, 2), {{0, {"a"}}, {1, {"b", "c"}}});
  std::map<int, Matrix> d;
  d.emplace(1, Matrix::identity(2, q));  // should be 1 x 2
  CHECK_THROWS_AS(ChainComplex(std::move(sp), std::move(d)), ShapeError);
  GradedVectorSpace sp2(q, DegreeWindow(0, 2), {{0, {"a"}}, {1, {"b"}}});
  std::map<int, Matrix> d2;
  d2.emplace(1, Matrix::identity(1, FieldSpec::prime(3)));
  CHECK_THROWS_AS(ChainComplex(std::move(sp2), std::move(d2)), FieldMismatch);
}

TEST_CASE("homology: disk is acyclic, zero differential gives full dimension") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    CHECK(homology(*disk(f), 0).dim == 0);
    CHECK(homology(*disk(f), 1).dim == 0);
    GradedVectorSpace sp(f, DegreeWindow(0, 4), {{2, {"x", "y", "z"}}});
    auto c = ChainComplex::make(std::move(sp), {});
    Homology h = homology(*c, 2);
    CHECK(h.dim == 3);
    CHECK(h.representatives == Matrix::identity(3, f));
  }
}

TEST_CASE("homology: tensor words on a single degree-1 letter, one word per degree") {
  // Brute-force oracle: words in one letter of degree 1 — exactly one word of
  // each length, living in the degree equal to its length, zero differential.
  FieldSpec q = FieldSpec::rationals();
  std::map<int, std::vector<std::string>> basis;
  for (int n = 0; n <= 6; ++n) {
    std::string w = "[";
    for (int i = 0; i < n; ++i) w += (i ? "|y" : "y");
    w += "]";
    basis[n] = {w};
  }
  auto c = ChainComplex::make(GradedVectorSpace(q, DegreeWindow(-1, 7), std::move(basis)), {});
  CHECK(homology(*c, 4).dim == 1);
  for (int n = 0; n <= 6; ++n) CHECK(homology(*c, n).dim == 1);
}

TEST_CASE("homology at the window edge raises TruncationError") {
  FieldSpec q = FieldSpec::rationals();
  auto d = disk(q);  // window [-1, 2]
  CHECK_THROWS_AS(homology(*d, 2), TruncationError);
  CHECK_THROWS_AS(homology(*d, -1), TruncationError);
  CHECK_NOTHROW(homology(*d, 1));
}

TEST_CASE("homology representatives are cycles completing a boundary basis") {
  FieldSpec q = FieldSpec::rationals();
  // d_2 sends w to u + 2v; d_1 = 0; cycles in degree 1 are everything.
  GradedVectorSpace sp(q, DegreeWindow(-1, 3), {{1, {"u", "v"}}, {2, {"w"}}});
  std::map<int, Matrix> d;
  d.emplace(2, from_rows(q, {{1}, {2}}));
  auto c = ChainComplex::make(std::move(sp), std::move(d));
  Homology h = homology(*c, 1);
  REQUIRE(h.dim == 1);
  // Deterministic representative: the first kernel-basis column extending the
  // boundary column span of (1,2).
  Matrix expect(2, 1, q);
  expect.set(0, 0, Scalar::one(q));
  CHECK(h.representatives == expect);
  // Reduction: rep + boundary reduces to the unit coordinate.
  HomologyBasis hb = homology_basis(*c, 1);
  Matrix v = h.representatives.column(0) + from_rows(q, {{1}, {2}});
  Matrix coords = hb.reduce(v);
  CHECK(coords == Matrix::identity(1, q));
  // A vector outside the cycle span in a bigger example is rejected elsewhere;
  // here every degree-1 vector is a cycle, so reduce always succeeds.
}

TEST_CASE("is_quasi_iso: identity true, zero endomorphism of the disk true") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    auto d = disk(f);
    ChainMap id(GradedMap::identity(d));
    QuasiIsoResult q1 = is_quasi_iso(id, TrustedRange(0, 1));
    CHECK(q1.ok);
    ChainMap z = ChainMap::zero(d, d);
    QuasiIsoResult q2 = is_quasi_iso(z, TrustedRange(0, 1));
    CHECK(q2.ok);  // both sides acyclic
    for (const auto& e : q2.evidence) {
      CHECK(e.dim_source == 0);
      CHECK(e.dim_target == 0);
    }
  }
}

TEST_CASE("is_quasi_iso: zero map on a non-acyclic complex is refused with evidence") {
  FieldSpec q = FieldSpec::rationals();
  GradedVectorSpace sp(q, DegreeWindow(-1, 1), {{0, {"a"}}});
  auto c = ChainComplex::make(std::move(sp), {});
  ChainMap z = ChainMap::zero(c, c);
  QuasiIsoResult res = is_quasi_iso(z, TrustedRange(0, 0));
  CHECK_FALSE(res.ok);
  REQUIRE(res.evidence.size() == 1);
  CHECK(res.evidence[0].dim_source == 1);
  CHECK(res.evidence[0].dim_target == 1);
  CHECK(res.evidence[0].rank_induced == 0);
}

TEST_CASE("is_quasi_iso demands one degree of honest margin") {
  FieldSpec q = FieldSpec::rationals();
  auto d = disk(q);  // window [-1, 2]
  ChainMap id(GradedMap::identity(d));
  CHECK_THROWS_AS(is_quasi_iso(id, TrustedRange(0, 2)), TruncationError);
  CHECK_THROWS_AS(is_quasi_iso(id, TrustedRange(-1, 1)), TruncationError);
  CHECK_NOTHROW(is_quasi_iso(id, TrustedRange(0, 1)));
}

TEST_CASE("chain map construction enforces graded commutation") {
  FieldSpec q = FieldSpec::rationals();
  auto d = disk(q);
  GradedVectorSpace sp(q, DegreeWindow(-1, 2), {{1, {"top"}}, {0, {"bot"}}});
  auto zero_d = ChainComplex::make(std::move(sp), {});
  // Identity components from the disk to the same space with zero differential
  // do not commute with d.
  std::map<int, Matrix> comp;
  comp.emplace(0, Matrix::identity(1, q));
  comp.emplace(1, Matrix::identity(1, q));
  GradedMap g(d, zero_d, 0, std::move(comp));
  CheckReport r = ChainMap::chain_check(g);
  REQUIRE_FALSE(r.passed());
  CHECK(r.failures.front().find("degree 1") != std::string::npos);
  CHECK_THROWS_AS(ChainMap{g}, AxiomError);
}

TEST_CASE("verify_chain_homotopy: h = 0 separates f = g from f != g") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    auto d = disk(f);
    ChainMap id(GradedMap::identity(d));
    GradedMap h = GradedMap::zero(d, d, 1);
    CHECK(ChainHomotopy{id, id, h}.verify().passed());
    ChainMap z = ChainMap::zero(d, d);
    CheckReport r = ChainHomotopy{id, z, h}.verify();
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("verify_chain_homotopy: contracting homotopy of the disk") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    auto d = disk(f);
    ChainMap id(GradedMap::identity(d));
    ChainMap z = ChainMap::zero(d, d);
    std::map<int, Matrix> hc;
    hc.emplace(0, Matrix::identity(1, f));
    GradedMap h(d, d, 1, std::move(hc));
    CHECK(ChainHomotopy{id, z, h}.verify().passed());
  }
}

TEST_CASE("homotopic maps induce the same map on homology") {
  FieldSpec q = FieldSpec::rationals();
  // Y = (span of a, degree 0, zero d) + disk; f = id, g = projection onto the
  // a-span; h kills a and lifts the disk bottom to its top.
  GradedVectorSpace sp(q, DegreeWindow(-1, 2), {{0, {"a", "bot"}}, {1, {"top"}}});
  std::map<int, Matrix> d;
  d.emplace(1, from_rows(q, {{0}, {1}}));
  auto y = ChainComplex::make(std::move(sp), std::move(d));
  ChainMap f(GradedMap::identity(y));
  std::map<int, Matrix> gc;
  gc.emplace(0, from_rows(q, {{1, 0}, {0, 0}}));
  ChainMap g(y, y, std::move(gc));
  std::map<int, Matrix> hc;
  hc.emplace(0, from_rows(q, {{0, 1}}));
  GradedMap h(y, y, 1, std::move(hc));
  REQUIRE(ChainHomotopy{f, g, h}.verify().passed());
  CHECK(induced_on_homology(f, 0) == induced_on_homology(g, 0));
  CHECK(induced_on_homology(f, 0) == Matrix::identity(1, q));
}

TEST_CASE("verify_split_ses: canonical direct-sum maps pass") {
  for (const auto& f : kFields) {
    CAPTURE(f.str());
    GradedVectorSpace spa(f, DegreeWindow(-1, 2), {{0, {"a"}}});
    auto a = ChainComplex::make(std::move(spa), {});
    auto b = disk(f);
    auto m = direct_sum(a, b);
    std::map<int, Matrix> ic, pc, sc;
    for (int n = m->window().lo; n <= m->window().hi; ++n) {
      std::size_t da = a->dim(n), db = b->dim(n);
      if (da + db == 0) continue;
      Matrix in(da + db, da, f), pn(db, da + db, f), sn(da + db, db, f);
      for (std::size_t i = 0; i < da; ++i) in.set(i, i, Scalar::one(f));
      for (std::size_t i = 0; i < db; ++i) pn.set(i, da + i, Scalar::one(f));
      for (std::size_t i = 0; i < db; ++i) sn.set(da + i, i, Scalar::one(f));
      if (!in.is_zero()) ic.emplace(n, std::move(in));
      if (!pn.is_zero()) pc.emplace(n, std::move(pn));
      if (!sn.is_zero()) sc.emplace(n, std::move(sn));
    }
    ChainMap i(a, m, std::move(ic));
    ChainMap p(m, b, std::move(pc));
    GradedMap s(b, m, 0, std::move(sc));
    CHECK(verify_split_ses(i, p, s).passed());
  }
}

TEST_CASE("verify_split_ses: p not surjective in some degree fails") {
  FieldSpec q = FieldSpec::rationals();
  GradedVectorSpace spa(q, DegreeWindow(-1, 1), {{0, {"a"}}});
  auto a = ChainComplex::make(std::move(spa), {});
  GradedVectorSpace spm(q, DegreeWindow(-1, 1), {{0, {"x", "y"}}});
  auto m = ChainComplex::make(std::move(spm), {});
  GradedVectorSpace spb(q, DegreeWindow(-1, 1), {{0, {"b"}}});
  auto b = ChainComplex::make(std::move(spb), {});
  std::map<int, Matrix> ic, pc;
  ic.emplace(0, from_rows(q, {{1}, {0}}));
  ChainMap i(a, m, std::move(ic));
  ChainMap p = ChainMap::zero(m, b);  // not surjective in degree 0
  GradedMap s = GradedMap::zero(b, m, 0);
  CheckReport r = verify_split_ses(i, p, s);
  REQUIRE_FALSE(r.passed());
  bool saw_section = false;
  for (const auto& line : r.failures) saw_section |= line.find("p s != id") != std::string::npos;
  CHECK(saw_section);
}

TEST_CASE("property: sphere-disk complexes have the predicted homology") {
  Lcg rng(20260814);
  for (const auto& f : kFields) {
    for (int trial = 0; trial < 12; ++trial) {
      SphereDiskModel model = random_sphere_disk(f, rng, 0, 6);
      CAPTURE(f.str());
      CAPTURE(trial);
      REQUIRE(model.complex->verify().passed());
      for (int n = 0; n <= 6; ++n) {
        Homology h = homology(*model.complex, n);
        CHECK(h.dim == model.sphere_count[n]);
      }
      // Determinism: recomputation yields identical representatives.
      CHECK(homology(*model.complex, 3).representatives == homology(*model.complex, 3).representatives);
    }
  }
}

TEST_CASE("property: homology dimensions are invariant under basis change") {
  Lcg rng(97);
  for (const auto& f : kFields) {
    for (int trial = 0; trial < 8; ++trial) {
      SphereDiskModel model = random_sphere_disk(f, rng, 0, 6);
      const auto& x = model.complex;
      std::map<int, Matrix> p;  // degreewise invertible change of basis
      std::map<int, Matrix> dconj;
      for (int n = x->window().lo; n <= x->window().hi; ++n)
        if (x->dim(n) > 0) p.emplace(n, random_invertible(f, x->dim(n), rng));
      auto pmat = [&](int n) {
        auto it = p.find(n);
        return it == p.end() ? Matrix::identity(x->dim(n), f) : it->second;
      };
      for (int n = x->window().lo; n <= x->window().hi; ++n) {
        if (x->dim(n) == 0 || x->dim(n - 1) == 0) continue;
        Matrix inv = *pmat(n).inverse();
        Matrix m = pmat(n - 1) * x->d(n) * inv;
        if (!m.is_zero()) dconj.emplace(n, std::move(m));
      }
      auto y = ChainComplex::make(GradedVectorSpace(x->space()), std::move(dconj));
      std::map<int, Matrix> fc;
      for (int n = x->window().lo; n <= x->window().hi; ++n) {
        if (x->dim(n) == 0) continue;
        Matrix inv = *pmat(n).inverse();
        if (!inv.is_zero()) fc.emplace(n, std::move(inv));
      }
      ChainMap conj_to_orig(y, x, std::move(fc));
      QuasiIsoResult res = is_quasi_iso(conj_to_orig, TrustedRange(0, 6));
      CAPTURE(f.str());
      CAPTURE(trial);
      CHECK(res.ok);
      for (int n = 0; n <= 6; ++n) CHECK(homology(*y, n).dim == model.sphere_count[n]);
    }
  }
}

TEST_CASE("property: quasi-isomorphisms preserve Euler characteristic on the trusted range") {
  Lcg rng(4242);
  for (const auto& f : kFields) {
    for (int trial = 0; trial < 8; ++trial) {
      SphereDiskModel model = random_sphere_disk(f, rng, 0, 6);
      const auto& x = model.complex;
      // Projection onto the sphere part: kill every disk cell.
      std::map<int, std::vector<std::string>> sb;
      for (int n = 0; n <= 6; ++n) {
        std::vector<std::string> ls;
        for (std::size_t i = 0; i < model.sphere_count[n]; ++i)
          ls.push_back("s" + std::to_string(n) + "_" + std::to_string(i));
        if (!ls.empty()) sb[n] = std::move(ls);
      }
      auto spheres = ChainComplex::make(GradedVectorSpace(f, x->window(), std::move(sb)), {});
      std::map<int, Matrix> pc;
      for (int n = 0; n <= 6; ++n) {
        if (spheres->dim(n) == 0 || x->dim(n) == 0) continue;
        Matrix m(spheres->dim(n), x->dim(n), f);
        for (std::size_t i = 0; i < spheres->dim(n); ++i)
          m.set(i, x->space().index(n, spheres->labels(n)[i]), Scalar::one(f));
        pc.emplace(n, std::move(m));
      }
      ChainMap proj(x, spheres, std::move(pc));
      QuasiIsoResult res = is_quasi_iso(proj, TrustedRange(0, 6));
      CAPTURE(f.str());
      CAPTURE(trial);
      REQUIRE(res.ok);
      long euler_src = 0, euler_tgt = 0;
      for (const auto& e : res.evidence) {
        long sign = (e.degree % 2 == 0) ? 1 : -1;
        euler_src += sign * static_cast<long>(e.dim_source);
        euler_tgt += sign * static_cast<long>(e.dim_target);
      }
      CHECK(euler_src == euler_tgt);
    }
  }
}

TEST_CASE("property: homotopy five — split ladder with quasi-iso outer verticals") {
  Lcg rng(7);
  FieldSpec f = FieldSpec::prime(2);
  for (int trial = 0; trial < 6; ++trial) {
    SphereDiskModel left = random_sphere_disk(f, rng, 0, 6);
    SphereDiskModel right = random_sphere_disk(f, rng, 0, 6);
    auto xm = direct_sum(left.complex, right.complex);
    // Bottom row: the same direct sum; verticals are identities, which are
    // quasi-isomorphisms; the middle must then be one as well.
    auto canonical = [&](const ComplexPtr& a, const ComplexPtr& b, const ComplexPtr& m) {
      std::map<int, Matrix> ic, pc, sc;
      for (int n = m->window().lo; n <= m->window().hi; ++n) {
        std::size_t da = a->dim(n), db = b->dim(n);
        if (da + db == 0) continue;
        Matrix in(da + db, da, f), pn(db, da + db, f), sn(da + db, db, f);
        for (std::size_t i = 0; i < da; ++i) in.set(i, i, Scalar::one(f));
        for (std::size_t i = 0; i < db; ++i) pn.set(i, da + i, Scalar::one(f));
        for (std::size_t i = 0; i < db; ++i) sn.set(da + i, i, Scalar::one(f));
        if (!in.is_zero()) ic.emplace(n, std::move(in));
        if (!pn.is_zero()) pc.emplace(n, std::move(pn));
        if (!sn.is_zero()) sc.emplace(n, std::move(sn));
      }
      return std::tuple<ChainMap, ChainMap, GradedMap>{ChainMap(a, m, std::move(ic)),
                                                       ChainMap(m, b, std::move(pc)),
                                                       GradedMap(b, m, 0, std::move(sc))};
    };
    auto [i, p, s] = canonical(left.complex, right.complex, xm);
    REQUIRE(verify_split_ses(i, p, s).passed());
    ChainMap fl(GradedMap::identity(left.complex));
    ChainMap fr(GradedMap::identity(right.complex));
    ChainMap fm(GradedMap::identity(xm));
    TrustedRange r(1, 5);
    REQUIRE(is_quasi_iso(fl, r).ok);
    REQUIRE(is_quasi_iso(fr, r).ok);
    // Ladder commutes: fm i = i fl and p fm = fr p.
    REQUIRE(fm.graded().compose(i.graded()).equals(i.graded().compose(fl.graded())));
    REQUIRE(p.graded().compose(fm.graded()).equals(fr.graded().compose(p.graded())));
    CHECK(is_quasi_iso(fm, r).ok);
  }
}

TEST_CASE("direct_sum and unit complex") {
  FieldSpec q = FieldSpec::rationals();
  auto u = unit_complex(q);
  CHECK(u->dim(0) == 1);
  CHECK(u->labels(0)[0] == "1");
  CHECK(homology(*u, 0).dim == 1);
  auto s = direct_sum(u, disk(q));
  CHECK(s->dim(0) == 2);
  CHECK(s->dim(1) == 1);
  CHECK(homology(*s, 0).dim == 1);
  CHECK(homology(*s, 1).dim == 0);
  CHECK(s->verify().passed());
}

TEST_CASE("graded map algebra: compose, sum, scale, equals") {
  FieldSpec q = FieldSpec::rationals();
  auto d = disk(q);
  GradedMap id = GradedMap::identity(d);
  GradedMap dd = GradedMap::differential(d);
  CHECK(dd.degree() == -1);
  CHECK(dd.compose(dd).is_zero());
  CHECK(dd.compose(id).equals(dd));
  CHECK((id + id).equals(id.scaled(Scalar::from_int(q, 2))));
  CHECK((id - id).is_zero());
  GradedVectorSpace other(q, DegreeWindow(-1, 2), {{0, {"z"}}});
  auto zc = ChainComplex::make(std::move(other), {});
  CHECK_THROWS_AS(id.compose(GradedMap::identity(zc)), ShapeError);
}
