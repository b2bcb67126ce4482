#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "hhg/dg.hpp"
#include "hhg/errors.hpp"

using namespace hhg;

namespace {

const std::vector<FieldSpec> kFields = {FieldSpec::rationals(), FieldSpec::prime(2),
                                        FieldSpec::prime(5)};

Scalar sc(const FieldSpec& f, long v) { return Scalar::from_int(f, v); }

/* Chain map sending each basis label of a to the identically named label of b
 * (and to zero when b lacks it). */
ChainMap label_map(const ComplexPtr& a, const ComplexPtr& b) {
  std::map<int, Matrix> comp;
  for (int n = a->window().lo; n <= a->window().hi; ++n) {
    const auto& ls = a->labels(n);
    if (ls.empty()) continue;
    Matrix m(b->dim(n), ls.size(), a->field());
    for (std::size_t j = 0; j < ls.size(); ++j)
      if (b->space().has_label(n, ls[j]))
        m.set(b->space().index(n, ls[j]), j, Scalar::one(a->field()));
    comp.emplace(n, std::move(m));
  }
  return ChainMap(a, b, std::move(comp));
}

template <class E, class F>
std::string thrown_message(F&& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

ConilpotentWitness word_length_stages(const DGBialgebra& b, const std::vector<int>& cutoffs) {
  // cutoffs are inclusive top degrees per stage; stage spans all basis
  // elements of degree <= cutoff (plus always the unit).
  ConilpotentWitness w;
  const auto& x = b.complex();
  for (int cut : cutoffs) {
    std::map<int, Matrix> stage;
    for (int n = std::max(0, x->window().lo); n <= x->window().hi; ++n) {
      if (x->dim(n) == 0 || n > cut) continue;
      stage.emplace(n, Matrix::identity(x->dim(n), x->field()));
    }
    w.stages.push_back(std::move(stage));
  }
  return w;
}

/* Stage t spans the labels of length ≤ t, length measured by `len`. */
ConilpotentWitness stages_by_length(const DGBialgebra& b, int max_len,
                                    const std::function<int(const std::string&)>& len) {
  ConilpotentWitness w;
  const auto& x = b.complex();
  for (int t = 0; t <= max_len; ++t) {
    std::map<int, Matrix> stage;
    for (int n = std::max(0, x->window().lo); n <= x->window().hi; ++n) {
      const auto& ls = x->labels(n);
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < ls.size(); ++i)
        if (len(ls[i]) <= t) keep.push_back(i);
      if (keep.empty()) continue;
      Matrix m(x->dim(n), keep.size(), x->field());
      for (std::size_t c = 0; c < keep.size(); ++c)
        m.set(keep[c], c, Scalar::one(x->field()));
      stage.emplace(n, std::move(m));
    }
    w.stages.push_back(std::move(stage));
  }
  return w;
}

}  // namespace

TEST_CASE("ground field bialgebra satisfies every axiom") {
  for (const auto& f : kFields) {
    DGBialgebra k = ground_field_bialgebra(f);
    CHECK(verify_dg_structure(k).passed());
    CHECK(verify_dg_structure(k, StructureKind::Algebra).passed());
    CHECK(verify_dg_structure(k, StructureKind::Coalgebra).passed());
    CHECK(is_connected(k.complex(), k.alg.eta));
    CHECK(is_simply_connected(k.complex(), k.alg.eta));
    CheckReport iso = verify_degreewise_iso(bialgebra_galois_map(k));
    CHECK(iso.passed());
  }
}

TEST_CASE("exterior algebra on one degree-1 generator") {
  DGBialgebra h = exterior_hopf({1});
  CHECK(h.complex()->dim(0) == 1);
  CHECK(h.complex()->dim(1) == 1);
  CHECK(h.complex()->labels(1)[0] == "x1");
  CHECK(verify_dg_structure(h).passed());

  SUBCASE("x is primitive and squares to zero") {
    const auto& sq = h.alg.square;
    // Δ(x) = x⊗1 + 1⊗x, rows of the square at degree 1 ordered by left degree.
    Matrix dx = h.coalg.delta.component(1);
    CHECK(dx.rows() == 2);
    CHECK(dx.at(sq.index(1, 0, 0, 0), 0) == sc(h.field(), 1));
    CHECK(dx.at(sq.index(1, 1, 0, 0), 0) == sc(h.field(), 1));
    // μ(x⊗x) = 0
    Matrix m2 = h.alg.mu.component(2);
    CHECK(m2.is_zero());
  }

  SUBCASE("Galois self-map matches the hand computation") {
    ChainMap beta = bialgebra_galois_map(h);
    const auto& sq = h.alg.square;
    // degree 0: 1⊗1 ↦ 1⊗1
    CHECK(beta.component(0) == Matrix::identity(1, h.field()));
    // degree 1: x⊗1 ↦ x⊗1, 1⊗x ↦ x⊗1 + 1⊗x
    Matrix b1 = beta.component(1);
    std::size_t c_1x = sq.index(1, 0, 0, 0), c_x1 = sq.index(1, 1, 0, 0);
    CHECK(b1.at(c_x1, c_x1) == sc(h.field(), 1));
    CHECK(b1.at(c_x1, c_1x) == sc(h.field(), 1));
    CHECK(b1.at(c_1x, c_1x) == sc(h.field(), 1));
    CHECK(b1.at(c_1x, c_x1) == sc(h.field(), 0));
    // degree 2: x⊗x ↦ x⊗x (the x·x term dies)
    CHECK(beta.component(2) == Matrix::identity(1, h.field()));
    CHECK(verify_degreewise_iso(beta).passed());
  }

  SUBCASE("connected but not simply connected") {
    CHECK(is_connected(h.complex(), h.alg.eta));
    CHECK_FALSE(is_simply_connected(h.complex(), h.alg.eta));
  }
}

TEST_CASE("exterior algebra on two generators: signs in products and coproducts") {
  DGBialgebra h = exterior_hopf({1, 3}, {"x1", "y3"});
  CHECK(verify_dg_structure(h).passed());
  const auto& sq = h.alg.square;
  const auto& x = h.complex();
  const FieldSpec f = h.field();

  // y·x = −x·y
  std::size_t r_xy = x->space().index(4, "x1y3");
  Matrix m4 = h.alg.mu.component(4);
  std::size_t c_xy = sq.index(4, 1, 0, 0);  // x1 ⊗ y3
  std::size_t c_yx = sq.index(4, 3, 0, 0);  // y3 ⊗ x1
  CHECK(m4.at(r_xy, c_xy) == sc(f, 1));
  CHECK(m4.at(r_xy, c_yx) == sc(f, -1));

  // Δ(x1y3) = 1⊗x1y3 + x1⊗y3 − y3⊗x1 + x1y3⊗1
  Matrix d4 = h.coalg.delta.component(4).column(x->space().index(4, "x1y3"));
  CHECK(d4.at(sq.index(4, 0, 0, 0), 0) == sc(f, 1));
  CHECK(d4.at(sq.index(4, 1, 0, 0), 0) == sc(f, 1));
  CHECK(d4.at(sq.index(4, 3, 0, 0), 0) == sc(f, -1));
  CHECK(d4.at(sq.index(4, 4, 0, 0), 0) == sc(f, 1));

  SUBCASE("generator inclusion is a bialgebra morphism") {
    DGBialgebra small = exterior_hopf({1}, {"x1"});
    ChainMap inc = label_map(small.complex(), h.complex());
    CHECK(verify_algebra_morphism(inc, small.alg, h.alg).passed());
    CHECK(verify_coalgebra_morphism(inc, small.coalg, h.coalg).passed());
    CHECK(verify_bialgebra_morphism(inc, small, h).passed());
  }

  SUBCASE("a map that drops the unit is rejected by name") {
    DGBialgebra small = exterior_hopf({1}, {"x1"});
    std::map<int, Matrix> comp;
    Matrix m1(h.complex()->dim(1), 1, f);
    m1.set(h.complex()->space().index(1, "x1"), 0, sc(f, 1));
    comp.emplace(1, std::move(m1));
    ChainMap bad(small.complex(), h.complex(), std::move(comp));  // kills 1
    CheckReport r = verify_algebra_morphism(bad, small.alg, h.alg);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("unit is not preserved") != std::string::npos);
  }

  SUBCASE("rescaling one product coefficient breaks compatibility, not associativity") {
    Matrix m4b = h.alg.mu.component(4);
    m4b.set(r_xy, c_xy, sc(f, 2));
    std::map<int, Matrix> comps;
    for (int n = sq.product()->window().lo; n <= sq.product()->window().hi; ++n)
      if (!h.alg.mu.component(n).is_zero()) comps.emplace(n, h.alg.mu.component(n));
    comps[4] = m4b;
    DGAlgebra mutated{x, sq, ChainMap(sq.product(), x, comps), h.alg.eta, h.alg.aug};
    CHECK(verify_dg_structure(mutated).passed());  // still an associative algebra
    DGBialgebra bad{mutated, h.coalg};
    CheckReport r = verify_dg_structure(bad);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("comultiplication is not multiplicative on x1⊗y3") !=
          std::string::npos);
  }
}

TEST_CASE("mutated coproducts fail with the offending axiom named") {
  DGBialgebra h = exterior_hopf({1});
  const auto& sq = h.alg.square;
  const auto& x = h.complex();
  const FieldSpec f = h.field();
  std::size_t c_1x = sq.index(1, 0, 0, 0), c_x1 = sq.index(1, 1, 0, 0);

  SUBCASE("Δ(x) = x⊗1 − 1⊗x breaks coassociativity and the counit") {
    Matrix d1(sq.product()->dim(1), 1, f);
    d1.set(c_x1, 0, sc(f, 1));
    d1.set(c_1x, 0, sc(f, -1));
    std::map<int, Matrix> comp = {{0, h.coalg.delta.component(0)}, {1, d1},
                                  {2, h.coalg.delta.component(2)}};
    DGCoalgebra mutated{x, sq, ChainMap(x, sq.product(), comp), h.coalg.eps, h.coalg.coaug};
    CheckReport r = verify_dg_structure(mutated);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("counit law") != std::string::npos);
  }

  SUBCASE("non-counital Δ(x) = x⊗1 kills Galois invertibility") {
    Matrix d1(sq.product()->dim(1), 1, f);
    d1.set(c_x1, 0, sc(f, 1));
    std::map<int, Matrix> comp = {{0, h.coalg.delta.component(0)}, {1, d1},
                                  {2, h.coalg.delta.component(2)}};
    DGCoalgebra mutated{x, sq, ChainMap(x, sq.product(), comp), h.coalg.eps, h.coalg.coaug};
    CheckReport rc = verify_dg_structure(mutated);
    CHECK_FALSE(rc.passed());
    CHECK(rc.summary().find("left counit law") != std::string::npos);
    DGBialgebra bad{h.alg, mutated};
    ChainMap beta = bialgebra_galois_map(bad);
    CheckReport r = verify_degreewise_iso(beta);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("degree 2") != std::string::npos);
    CHECK(beta.component(2).is_zero());  // x⊗x ↦ x·x⊗1 = 0
  }

  SUBCASE("rescaled unit row breaks the unit law by name") {
    Matrix m3 = h.alg.mu.component(1);
    m3.set(0, c_1x, sc(f, 2));
    std::map<int, Matrix> comp = {{0, h.alg.mu.component(0)}, {1, m3},
                                  {2, h.alg.mu.component(2)}};
    DGAlgebra mutated{x, sq, ChainMap(sq.product(), x, comp), h.alg.eta, h.alg.aug};
    CheckReport r = verify_dg_structure(mutated);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("left unit law") != std::string::npos);
  }
}

TEST_CASE("free primitive bialgebra on one even generator") {
  const FieldSpec f = FieldSpec::rationals();
  GradedVectorSpace v(f, DegreeWindow(2, 2), {{2, {"u"}}});
  DGBialgebra t = free_primitive_bialgebra(v, DegreeWindow(0, 6));
  const auto& x = t.complex();
  CHECK(x->window().lo == -1);
  CHECK(x->window().hi == 6);
  std::vector<std::size_t> dims;
  for (int n = 0; n <= 6; ++n) dims.push_back(x->dim(n));
  CHECK(dims == std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1});
  CHECK(verify_dg_structure(t).passed());
  CHECK(is_simply_connected(x, t.alg.eta));

  SUBCASE("Δ(u|u) = u|u⊗1 + 2·u⊗u + 1⊗u|u") {
    const auto& sq = t.alg.square;
    Matrix d = t.coalg.delta.component(4).column(x->space().index(4, "u|u"));
    CHECK(d.at(sq.index(4, 0, 0, 0), 0) == sc(f, 1));
    CHECK(d.at(sq.index(4, 2, 0, 0), 0) == sc(f, 2));
    CHECK(d.at(sq.index(4, 4, 0, 0), 0) == sc(f, 1));
  }

  SUBCASE("multiplication truncates concatenation past the window") {
    const auto& sq = t.alg.square;
    // u|u ⊗ u|u would land in degree 8 > 6: the pair is clipped from the square.
    CHECK_FALSE(sq.find(8, 4, 0, 0).has_value());
    // u ⊗ u|u concatenates to u|u|u.
    Matrix m6 = t.alg.mu.component(6);
    CHECK(m6.at(x->space().index(6, "u|u|u"), sq.index(6, 2, 0, 0)) == sc(f, 1));
  }

  SUBCASE("Galois self-map is a degreewise isomorphism") {
    CHECK(verify_degreewise_iso(bialgebra_galois_map(t)).passed());
  }

  SUBCASE("over F2 the Galois self-map still inverts") {
    GradedVectorSpace v2(FieldSpec::prime(2), DegreeWindow(2, 2), {{2, {"u"}}});
    DGBialgebra t2 = free_primitive_bialgebra(v2, DegreeWindow(0, 6));
    CHECK(verify_dg_structure(t2).passed());
    CHECK(verify_degreewise_iso(bialgebra_galois_map(t2)).passed());
  }

  SUBCASE("degree-0 generators are rejected") {
    GradedVectorSpace bad(f, DegreeWindow(0, 1), {{0, {"e"}}});
    CHECK_THROWS_AS(free_primitive_bialgebra(bad, DegreeWindow(0, 3)), NonConnectedError);
  }
}

TEST_CASE("split conilpotent towers") {
  SUBCASE("ground field: the one-stage tower passes") {
    DGBialgebra k = ground_field_bialgebra(FieldSpec::rationals());
    ConilpotentWitness w;
    w.stages.push_back({{0, Matrix::identity(1, k.field())}});
    CHECK(verify_split_conilpotent(k.coalg, w).passed());
  }

  SUBCASE("primitively generated exterior coalgebra: unit-then-everything passes") {
    DGBialgebra h = exterior_hopf({3});
    ConilpotentWitness w = word_length_stages(h, {0, 3});
    CHECK(verify_split_conilpotent(h.coalg, w).passed());
  }

  SUBCASE("tensor algebra needs the middle stage") {
    GradedVectorSpace v(FieldSpec::rationals(), DegreeWindow(2, 2), {{2, {"u"}}});
    DGBialgebra t = free_primitive_bialgebra(v, DegreeWindow(0, 4));
    ConilpotentWitness skip = word_length_stages(t, {0, 4});
    CheckReport r = verify_split_conilpotent(t.coalg, skip);
    CHECK_FALSE(r.passed());
    CHECK(r.summary().find("stage 1") != std::string::npos);
    CHECK(r.summary().find("degree 4") != std::string::npos);
    ConilpotentWitness full = word_length_stages(t, {0, 2, 4});
    CHECK(verify_split_conilpotent(t.coalg, full).passed());
  }

  SUBCASE("a stage that is not a subcoalgebra is a witness error") {
    DGBialgebra h = exterior_hopf({1, 3}, {"x1", "y3"});
    const FieldSpec f = h.field();
    ConilpotentWitness w;
    w.stages.push_back({{0, Matrix::identity(1, f)}});
    w.stages.push_back({{0, Matrix::identity(1, f)}, {4, Matrix::identity(1, f)}});
    w.stages.push_back({{0, Matrix::identity(1, f)},
                        {1, Matrix::identity(1, f)},
                        {3, Matrix::identity(1, f)},
                        {4, Matrix::identity(1, f)}});
    std::string msg = thrown_message<WitnessError>(
        [&] { verify_split_conilpotent(h.coalg, w); });
    CHECK(msg.find("stage 1 is not a subcoalgebra in degree 4") != std::string::npos);
  }

  SUBCASE("malformed towers are witness errors") {
    DGBialgebra h = exterior_hopf({3});
    const FieldSpec f = h.field();
    ConilpotentWitness missing_top = word_length_stages(h, {0, 0});
    std::string msg = thrown_message<WitnessError>(
        [&] { verify_split_conilpotent(h.coalg, missing_top); });
    CHECK(msg.find("final stage does not exhaust") != std::string::npos);

    ConilpotentWitness bad_base = word_length_stages(h, {3, 3});
    msg = thrown_message<WitnessError>([&] { verify_split_conilpotent(h.coalg, bad_base); });
    CHECK(msg.find("stage 0 is not the coaugmentation image") != std::string::npos);

    ConilpotentWitness empty;
    CHECK_THROWS_AS(verify_split_conilpotent(h.coalg, empty), WitnessError);
  }
}

TEST_CASE("connectivity gates") {
  const FieldSpec f = FieldSpec::rationals();
  SUBCASE("two degree-0 classes are not connected") {
    ComplexPtr x = ChainComplex::make(
        GradedVectorSpace(f, DegreeWindow(-1, 1), {{0, {"1", "e"}}}), {});
    CHECK_FALSE(is_connected(x, unit_map(x, "1")));
  }
  SUBCASE("a unit killed in homology is not connected") {
    std::map<int, Matrix> d;
    Matrix d1(1, 1, f);
    d1.set(0, 0, sc(f, 1));
    d.emplace(1, std::move(d1));
    ComplexPtr x = ChainComplex::make(
        GradedVectorSpace(f, DegreeWindow(-1, 2), {{0, {"1"}}, {1, {"t"}}}), std::move(d));
    CHECK_FALSE(is_connected(x, unit_map(x, "1")));
  }
  SUBCASE("exterior and tensor examples") {
    DGBialgebra h3 = exterior_hopf({3});
    CHECK(is_simply_connected(h3.complex(), h3.alg.eta));
    GradedVectorSpace v(f, DegreeWindow(2, 2), {{2, {"u"}}});
    DGBialgebra t = free_primitive_bialgebra(v, DegreeWindow(0, 4));
    CHECK(is_simply_connected(t.complex(), t.alg.eta));
  }
}

TEST_CASE("structure tables validate degrees") {
  DGBialgebra h = exterior_hopf({1});
  ProductTable bad = [&](int p, const std::string&, int q, const std::string&) {
    return std::vector<Term>{{Scalar::one(h.field()), p + q + 2, "1"}};
  };
  CHECK_THROWS_AS(mu_from_table(h.complex(), h.alg.square, bad), ShapeError);
  CHECK_THROWS_AS(exterior_hopf({2}), OddDegreeError);
  CHECK_THROWS_AS(exterior_hopf({-1}), OddDegreeError);
  CHECK_THROWS_AS(exterior_hopf({1, 3}, {"only-one"}), ShapeError);
}

TEST_CASE("property: exterior Hopf algebras verify over every field") {
  const std::vector<std::vector<int>> gens = {{1}, {3}, {1, 3}, {3, 5}};
  for (const auto& f : kFields) {
    for (const auto& degs : gens) {
      CAPTURE(f.str());
      DGBialgebra h = exterior_hopf_over(f, degs);
      CHECK(verify_dg_structure(h).passed());
      CHECK(verify_degreewise_iso(bialgebra_galois_map(h)).passed());
      CHECK(is_connected(h.complex(), h.alg.eta));
      // primitively generated ⇒ the tower by generator count splits
      std::vector<std::string> names;
      for (int d : degs) names.push_back("x" + std::to_string(d));
      auto count = [&](const std::string& l) {
        int c = 0;
        for (const auto& nm : names)
          if (l.find(nm) != std::string::npos) ++c;
        return c;
      };
      ConilpotentWitness w = stages_by_length(h, static_cast<int>(degs.size()), count);
      CHECK(verify_split_conilpotent(h.coalg, w).passed());
    }
  }
}
