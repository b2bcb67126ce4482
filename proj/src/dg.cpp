#include "hhg/dg.hpp"

#include <algorithm>
#include <numeric>

namespace hhg {

namespace {
bool odd(int n) { return n % 2 != 0; }

std::string witness_label(const GradedMap& diff) {
  for (int n = diff.source()->window().lo; n <= diff.source()->window().hi; ++n) {
    Matrix m = diff.component(n);
    if (m.is_zero()) continue;
    std::size_t col = diff.source()->dim(n);
    for (const auto& [ij, v] : m.entries()) col = std::min(col, ij.second);
    return diff.source()->labels(n)[col] + " (degree " + std::to_string(n) + ")";
  }
  return "";
}

/* mu-like evaluation on a basis pair of the square layout. */
Matrix pair_column(const ChainMap& mu, const TensorLayout& sq, int n, std::size_t c) {
  return mu.component(n).column(c);
}
}  // namespace

ChainMap mu_from_table(const ComplexPtr& a, const TensorLayout& square, const ProductTable& t) {
  std::map<int, Matrix> comp;
  const auto& w = square.product()->window();
  for (int n = w.lo; n <= w.hi; ++n) {
    const auto& fs = square.factors(n);
    if (fs.empty()) continue;
    Matrix m(a->dim(n), fs.size(), a->field());
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& [p, i, j] = fs[c];
      int q = n - p;
      for (const Term& term : t(p, square.left()->labels(p)[i], q, square.right()->labels(q)[j])) {
        if (term.degree != n)
          throw ShapeError("product table term of degree " + std::to_string(term.degree) +
                           " from inputs of total degree " + std::to_string(n));
        if (term.coef.is_zero()) continue;
        m.add_to(a->space().index(n, term.label), c, term.coef);
      }
    }
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return ChainMap(square.product(), a, std::move(comp));
}

ChainMap delta_from_table(const ComplexPtr& c, const TensorLayout& square,
                          const CoproductTable& t) {
  std::map<int, Matrix> comp;
  for (int n = c->window().lo; n <= c->window().hi; ++n) {
    const auto& ls = c->labels(n);
    if (ls.empty()) continue;
    Matrix m(square.product()->dim(n), ls.size(), c->field());
    for (std::size_t col = 0; col < ls.size(); ++col) {
      for (const CoTerm& ct : t(n, ls[col])) {
        if (ct.coef.is_zero()) continue;
        std::size_t i = square.left()->space().index(ct.left_degree, ct.left);
        std::size_t j = square.right()->space().index(n - ct.left_degree, ct.right);
        m.add_to(square.index(n, ct.left_degree, i, j), col, ct.coef);
      }
    }
    if (!m.is_zero()) comp.emplace(n, std::move(m));
  }
  return ChainMap(c, square.product(), std::move(comp));
}

ChainMap unit_map(const ComplexPtr& a, const std::string& unit_label) {
  Matrix m(a->dim(0), 1, a->field());
  m.set(a->space().index(0, unit_label), 0, Scalar::one(a->field()));
  return ChainMap(unit_complex(a->field()), a, {{0, std::move(m)}});
}

ChainMap counit_map(const ComplexPtr& a, const std::string& unit_label) {
  Matrix m(1, a->dim(0), a->field());
  m.set(0, a->space().index(0, unit_label), Scalar::one(a->field()));
  return ChainMap(a, unit_complex(a->field()), {{0, std::move(m)}});
}

CheckReport verify_dg_structure(const DGAlgebra& a) {
  CheckReport r;
  if (!same_space(a.mu.source(), a.square.product()) || !same_space(a.mu.target(), a.complex))
    throw ShapeError("multiplication endpoints do not match the algebra");
  if (!same_space(a.eta.target(), a.complex)) throw ShapeError("unit target mismatch");
  GradedMap id = GradedMap::identity(a.complex);
  // Associativity on the clipped triple tensor.
  TensorLayout t3l = tensor(a.square.product(), a.complex, a.complex->window());
  TensorLayout t3r = tensor(a.complex, a.square.product(), a.complex->window());
  GradedMap mu_id = tensor_map(a.mu.graded(), id, t3l, a.square);
  GradedMap id_mu = tensor_map(id, a.mu.graded(), t3r, a.square);
  ChainMap re = canonical_relabel(t3l.product(), t3r.product());
  GradedMap lhs = a.mu.graded().compose(mu_id);
  GradedMap rhs = a.mu.graded().compose(id_mu).compose(re.graded());
  if (!lhs.equals(rhs))
    r.fail("associativity fails on " + witness_label(lhs - rhs));
  // Unit laws through the explicit unit isomorphisms.
  TensorLayout t_ua = tensor(a.eta.source(), a.complex, a.complex->window());
  TensorLayout t_au = tensor(a.complex, a.eta.source(), a.complex->window());
  GradedMap eta_id = tensor_map(a.eta.graded(), id, t_ua, a.square);
  GradedMap id_eta = tensor_map(id, a.eta.graded(), t_au, a.square);
  if (!a.mu.graded().compose(eta_id).equals(unit_iso_left(t_ua).graded()))
    r.fail("left unit law fails");
  if (!a.mu.graded().compose(id_eta).equals(unit_iso_right(t_au).graded()))
    r.fail("right unit law fails");
  if (a.aug) {
    if (!same_space(a.aug->source(), a.complex)) throw ShapeError("augmentation source mismatch");
    if (!a.aug->compose(a.eta).equals(ChainMap::identity(a.eta.source())))
      r.fail("augmentation does not split the unit");
    TensorLayout t_uu = tensor(a.aug->target(), a.aug->target());
    GradedMap both = tensor_map(a.aug->graded(), a.aug->graded(), a.square, t_uu);
    if (!a.aug->graded().compose(a.mu.graded()).equals(unit_iso_left(t_uu).graded().compose(both)))
      r.fail("augmentation is not multiplicative on " +
             witness_label(a.aug->graded().compose(a.mu.graded()) -
                           unit_iso_left(t_uu).graded().compose(both)));
  }
  return r;
}

CheckReport verify_dg_structure(const DGCoalgebra& c) {
  CheckReport r;
  if (!same_space(c.delta.source(), c.complex) ||
      !same_space(c.delta.target(), c.square.product()))
    throw ShapeError("comultiplication endpoints do not match the coalgebra");
  if (!same_space(c.eps.source(), c.complex)) throw ShapeError("counit source mismatch");
  GradedMap id = GradedMap::identity(c.complex);
  TensorLayout t3l = tensor(c.square.product(), c.complex, c.complex->window());
  TensorLayout t3r = tensor(c.complex, c.square.product(), c.complex->window());
  GradedMap delta_id = tensor_map(c.delta.graded(), id, c.square, t3l);
  GradedMap id_delta = tensor_map(id, c.delta.graded(), c.square, t3r);
  ChainMap re = canonical_relabel(t3l.product(), t3r.product());
  GradedMap lhs = re.graded().compose(delta_id.compose(c.delta.graded()));
  GradedMap rhs = id_delta.compose(c.delta.graded());
  if (!lhs.equals(rhs))
    r.fail("coassociativity fails on " + witness_label(lhs - rhs));
  TensorLayout t_uc = tensor(c.eps.target(), c.complex, c.complex->window());
  TensorLayout t_cu = tensor(c.complex, c.eps.target(), c.complex->window());
  GradedMap eps_id = tensor_map(c.eps.graded(), id, c.square, t_uc);
  GradedMap id_eps = tensor_map(id, c.eps.graded(), c.square, t_cu);
  if (!unit_iso_left(t_uc).graded().compose(eps_id).compose(c.delta.graded()).equals(id))
    r.fail("left counit law fails");
  if (!unit_iso_right(t_cu).graded().compose(id_eps).compose(c.delta.graded()).equals(id))
    r.fail("right counit law fails");
  if (c.coaug) {
    if (!same_space(c.coaug->target(), c.complex)) throw ShapeError("coaugmentation target mismatch");
    if (!c.eps.compose(*c.coaug).equals(ChainMap::identity(c.coaug->source())))
      r.fail("counit does not split the coaugmentation");
    TensorLayout t_uu = tensor(c.coaug->source(), c.coaug->source());
    Matrix one = Matrix::identity(1, c.field());
    ChainMap delta_u(c.coaug->source(), t_uu.product(), {{0, std::move(one)}});
    GradedMap both = tensor_map(c.coaug->graded(), c.coaug->graded(), t_uu, c.square);
    if (!c.delta.graded().compose(c.coaug->graded()).equals(both.compose(delta_u.graded())))
      r.fail("coaugmentation is not a coalgebra map");
  }
  return r;
}

CheckReport verify_dg_structure(const DGBialgebra& b, StructureKind kind) {
  if (kind == StructureKind::Algebra) return verify_dg_structure(b.alg);
  if (kind == StructureKind::Coalgebra) return verify_dg_structure(b.coalg);
  CheckReport r;
  if (!same_space(b.alg.complex, b.coalg.complex) ||
      !same_space(b.alg.square.product(), b.coalg.square.product()))
    throw ShapeError("bialgebra halves live on different complexes");
  r.absorb(verify_dg_structure(b.alg), "algebra: ");
  r.absorb(verify_dg_structure(b.coalg), "coalgebra: ");
  const auto& sq = b.alg.square;
  const auto& x = b.alg.complex;
  const FieldSpec f = x->field();
  // Counit is an algebra map: ε(ab) = ε(a)ε(b) on every basis pair.
  for (int n = sq.product()->window().lo; n <= sq.product()->window().hi; ++n) {
    const auto& fs = sq.factors(n);
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& [p, i, j] = fs[c];
      Matrix lhs = b.coalg.eps.component(n) * pair_column(b.alg.mu, sq, n, c);
      Matrix rhs(n == 0 ? 1 : b.coalg.eps.target()->dim(n), 1, f);
      if (n == 0)
        rhs.set(0, 0, b.coalg.eps.component(0).at(0, i) * b.coalg.eps.component(0).at(0, j));
      if (lhs != rhs) {
        r.fail("counit is not multiplicative on " + x->labels(p)[i] + "⊗" + x->labels(n - p)[j]);
        break;
      }
    }
  }
  // Comultiplication is an algebra map: Δ(ab) = Δ(a)Δ(b) with Koszul signs.
  for (int n = sq.product()->window().lo; n <= sq.product()->window().hi; ++n) {
    const auto& fs = sq.factors(n);
    for (std::size_t c = 0; c < fs.size(); ++c) {
      const auto& [p, i, j] = fs[c];
      int q = n - p;
      Matrix lhs = b.coalg.delta.component(n) * pair_column(b.alg.mu, sq, n, c);
      Matrix rhs(sq.product()->dim(n), 1, f);
      Matrix da = b.coalg.delta.component(p).column(i);
      Matrix db = b.coalg.delta.component(q).column(j);
      for (const auto& [ra, ca] : da.entries()) {
        const auto& [p1, i1, i2] = sq.factors(p)[ra.first];
        for (const auto& [rb, cb] : db.entries()) {
          const auto& [q1, j1, j2] = sq.factors(q)[rb.first];
          Scalar sign = koszul_sign(f, p - p1, q1);
          Matrix left = b.alg.mu.component(p1 + q1).column(sq.index(p1 + q1, p1, i1, j1));
          Matrix right =
              b.alg.mu.component(n - p1 - q1).column(sq.index(n - p1 - q1, p - p1, i2, j2));
          for (const auto& [ru, cu] : left.entries())
            for (const auto& [rv, cv] : right.entries()) {
              auto at = sq.find(n, p1 + q1, ru.first, rv.first);
              if (at) rhs.add_to(*at, 0, sign * ca * cb * cu * cv);
            }
        }
      }
      if (lhs != rhs)
        r.fail("comultiplication is not multiplicative on " + x->labels(p)[i] + "⊗" +
               x->labels(q)[j]);
    }
  }
  // Δ(1) = 1⊗1 and ε(1) = 1.
  Matrix unit_col = b.alg.eta.component(0).column(0);
  Matrix d1 = b.coalg.delta.component(0) * unit_col;
  Matrix expect(sq.product()->dim(0), 1, f);
  std::size_t u = 0;
  for (const auto& [ij, v] : unit_col.entries()) u = ij.first;
  expect.set(sq.index(0, 0, u, u), 0, Scalar::one(f));
  if (d1 != expect) r.fail("unit is not grouplike");
  if (!b.coalg.eps.compose(b.alg.eta).equals(ChainMap::identity(b.alg.eta.source())))
    r.fail("counit of the unit is not 1");
  return r;
}

CheckReport verify_algebra_morphism(const ChainMap& f, const DGAlgebra& a, const DGAlgebra& b) {
  CheckReport r;
  if (!same_space(f.source(), a.complex) || !same_space(f.target(), b.complex))
    throw ShapeError("morphism endpoints do not match the algebras");
  if (!f.compose(a.eta).equals(b.eta)) r.fail("unit is not preserved");
  GradedMap ff = tensor_map(f.graded(), f.graded(), a.square, b.square);
  if (!f.graded().compose(a.mu.graded()).equals(b.mu.graded().compose(ff)))
    r.fail("multiplicativity fails on " +
           witness_label(f.graded().compose(a.mu.graded()) - b.mu.graded().compose(ff)));
  if (a.aug && b.aug && !b.aug->compose(f).equals(*a.aug)) r.fail("augmentation is not preserved");
  return r;
}

CheckReport verify_coalgebra_morphism(const ChainMap& f, const DGCoalgebra& a,
                                      const DGCoalgebra& b) {
  CheckReport r;
  if (!same_space(f.source(), a.complex) || !same_space(f.target(), b.complex))
    throw ShapeError("morphism endpoints do not match the coalgebras");
  if (!b.eps.compose(f).equals(a.eps)) r.fail("counit is not preserved");
  GradedMap ff = tensor_map(f.graded(), f.graded(), a.square, b.square);
  if (!ff.compose(a.delta.graded()).equals(b.delta.graded().compose(f.graded())))
    r.fail("comultiplicativity fails on " +
           witness_label(ff.compose(a.delta.graded()) - b.delta.graded().compose(f.graded())));
  if (a.coaug && b.coaug && !f.compose(*a.coaug).equals(*b.coaug))
    r.fail("coaugmentation is not preserved");
  return r;
}

CheckReport verify_bialgebra_morphism(const ChainMap& f, const DGBialgebra& a,
                                      const DGBialgebra& b) {
  CheckReport r;
  r.absorb(verify_algebra_morphism(f, a.alg, b.alg), "algebra: ");
  r.absorb(verify_coalgebra_morphism(f, a.coalg, b.coalg), "coalgebra: ");
  return r;
}

DGBialgebra ground_field_bialgebra(const FieldSpec& f) {
  ComplexPtr u = unit_complex(f);
  TensorLayout sq = tensor(u, u, u->window());
  ChainMap mu = unit_iso_left(sq);
  ChainMap eta = ChainMap::identity(u);
  ChainMap delta(u, sq.product(), {{0, Matrix::identity(1, f)}});
  ChainMap eps = ChainMap::identity(u);
  DGAlgebra alg{u, sq, mu, eta, eps};
  DGCoalgebra coalg{u, sq, delta, eps, eta};
  return DGBialgebra{std::move(alg), std::move(coalg)};
}

DGBialgebra exterior_hopf(const std::vector<int>& degrees, std::vector<std::string> names) {
  const FieldSpec f = FieldSpec::rationals();
  return exterior_hopf_over(f, degrees, std::move(names));
}

DGBialgebra exterior_hopf_over(const FieldSpec& f, const std::vector<int>& degrees,
                               std::vector<std::string> names) {
  const std::size_t k = degrees.size();
  for (int d : degrees)
    if (d <= 0 || !odd(d))
      throw OddDegreeError("exterior generators must have odd positive degree, got " +
                           std::to_string(d));
  if (names.empty())
    for (std::size_t i = 0; i < k; ++i) {
      std::string base = "x" + std::to_string(degrees[i]);
      for (std::size_t j = 0; j < i; ++j)
        if (names.size() > j && names[j] == base) base += "_" + std::to_string(i);
      names.push_back(base);
    }
  if (names.size() != k) throw ShapeError("generator name count mismatch");

  int total = std::accumulate(degrees.begin(), degrees.end(), 0);
  DegreeWindow w(-1, 2 * total + 1);
  auto mask_degree = [&](unsigned m) {
    int d = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (m & (1u << i)) d += degrees[i];
    return d;
  };
  auto mask_label = [&](unsigned m) {
    if (m == 0) return std::string("1");
    std::string l;
    for (std::size_t i = 0; i < k; ++i)
      if (m & (1u << i)) l += names[i];
    return l;
  };
  std::map<int, std::vector<std::string>> basis;
  std::map<int, std::vector<unsigned>> masks;
  for (unsigned m = 0; m < (1u << k); ++m) {
    basis[mask_degree(m)].push_back(mask_label(m));
    masks[mask_degree(m)].push_back(m);
  }
  ComplexPtr x = ChainComplex::make(GradedVectorSpace(f, w, std::move(basis)), {});
  TensorLayout sq = tensor(x, x, w);
  std::map<std::string, unsigned> mask_of;
  for (const auto& [deg, ms] : masks)
    for (unsigned m : ms) mask_of[mask_label(m)] = m;
  // Inversions: generator pairs (s ∈ S, t ∈ T) with s > t pick up −1 each
  // (all generators odd).
  auto inversions = [&](unsigned s, unsigned t) {
    int inv = 0;
    for (std::size_t a = 0; a < k; ++a)
      if (s & (1u << a))
        for (std::size_t b = 0; b < a; ++b)
          if (t & (1u << b)) ++inv;
    return inv;
  };
  ProductTable prod = [&](int p, const std::string& la, int q, const std::string& lb) {
    unsigned s = mask_of.at(la), t = mask_of.at(lb);
    std::vector<Term> out;
    if (s & t) return out;  // repeated generator
    Scalar coef = odd(inversions(s, t)) ? -Scalar::one(f) : Scalar::one(f);
    out.push_back({coef, p + q, mask_label(s | t)});
    return out;
  };
  CoproductTable coprod = [&](int n, const std::string& l) {
    unsigned m = mask_of.at(l);
    std::vector<CoTerm> out;
    for (unsigned u = m;; u = (u - 1) & m) {
      unsigned v = m & ~u;
      Scalar coef = odd(inversions(u, v)) ? -Scalar::one(f) : Scalar::one(f);
      out.push_back({coef, mask_degree(u), mask_label(u), mask_label(v)});
      if (u == 0) break;
    }
    return out;
  };
  ChainMap mu = mu_from_table(x, sq, prod);
  ChainMap delta = delta_from_table(x, sq, coprod);
  ChainMap eta = unit_map(x, "1");
  ChainMap eps = counit_map(x, "1");
  DGAlgebra alg{x, sq, mu, eta, eps};
  DGCoalgebra coalg{x, sq, delta, eps, eta};
  return DGBialgebra{std::move(alg), std::move(coalg)};
}

DGBialgebra free_primitive_bialgebra(const GradedVectorSpace& v, const DegreeWindow& w) {
  const FieldSpec f = v.field();
  GradedVectorSpace words = tensor_algebra_trunc(v, w);
  DegreeWindow padded(std::min(w.lo, 0) - 1, w.hi);
  std::map<int, std::vector<std::string>> basis;
  for (const auto& [n, ls] : words.basis()) basis[n] = ls;
  ComplexPtr x = ChainComplex::make(GradedVectorSpace(f, padded, std::move(basis)), {});
  TensorLayout sq = tensor(x, x, padded);
  std::map<std::string, int> letter_degree;
  for (const auto& [n, ls] : v.basis())
    for (const auto& l : ls) letter_degree[l] = n;
  auto degree_of = [&](const std::vector<std::string>& letters) {
    int d = 0;
    for (const auto& l : letters) d += letter_degree.at(l);
    return d;
  };
  ProductTable prod = [&, x](int p, const std::string& la, int q, const std::string& lb) {
    std::vector<Term> out;
    auto a = split_word(la);
    auto b = split_word(lb);
    for (const auto& l : b) a.push_back(l);
    std::string joined = join_word(a);
    if (x->space().has_label(p + q, joined)) out.push_back({Scalar::one(f), p + q, joined});
    return out;  // concatenation beyond the window truncates to zero
  };
  CoproductTable coprod = [&](int n, const std::string& l) {
    std::vector<CoTerm> out;
    auto letters = split_word(l);
    const std::size_t kk = letters.size();
    for (unsigned m = 0; m < (1u << kk); ++m) {
      std::vector<std::string> left, right;
      int sign_count = 0;
      for (std::size_t a = 0; a < kk; ++a) {
        if (m & (1u << a)) {
          // letter a goes left; it crosses every earlier letter staying right
          for (std::size_t b = 0; b < a; ++b)
            if (!(m & (1u << b)) && odd(letter_degree.at(letters[b])) &&
                odd(letter_degree.at(letters[a])))
              ++sign_count;
          left.push_back(letters[a]);
        } else {
          right.push_back(letters[a]);
        }
      }
      Scalar coef = odd(sign_count) ? -Scalar::one(f) : Scalar::one(f);
      out.push_back({coef, degree_of(left), join_word(left), join_word(right)});
    }
    return out;
  };
  ChainMap mu = mu_from_table(x, sq, prod);
  ChainMap delta = delta_from_table(x, sq, coprod);
  ChainMap eta = unit_map(x, "1");
  ChainMap eps = counit_map(x, "1");
  DGAlgebra alg{x, sq, mu, eta, eps};
  DGCoalgebra coalg{x, sq, delta, eps, eta};
  return DGBialgebra{std::move(alg), std::move(coalg)};
}

bool is_connected(const ComplexPtr& x, const ChainMap& unit) {
  for (int n = x->window().lo; n < 0; ++n)
    if (x->dim(n) != 0) return false;
  Homology h0 = homology(*x, 0);
  if (h0.dim != 1) return false;
  Matrix u = unit.component(0);
  if (u.is_zero()) return false;
  HomologyBasis hb = homology_basis(*x, 0);
  return !hb.reduce(u.column(0)).is_zero();
}

bool is_simply_connected(const ComplexPtr& x, const ChainMap& unit) {
  return is_connected(x, unit) && x->dim(1) == 0;
}

ChainMap bialgebra_galois_map(const DGBialgebra& h) {
  const auto& x = h.complex();
  const auto& sq = h.alg.square;
  GradedMap id = GradedMap::identity(x);
  TensorLayout t3l = tensor(sq.product(), x, x->window());
  TensorLayout t3r = tensor(x, sq.product(), x->window());
  GradedMap id_delta = tensor_map(id, h.coalg.delta.graded(), sq, t3r);
  ChainMap re = canonical_relabel(t3r.product(), t3l.product());
  GradedMap mu_id = tensor_map(h.alg.mu.graded(), id, t3l, sq);
  return ChainMap(mu_id.compose(re.graded()).compose(id_delta));
}

TensorAlgebra tensor_product_algebra(const DGAlgebra& a, const DGAlgebra& b) {
  if (!(a.field() == b.field()))
    throw FieldMismatch("tensor product algebra over different fields");
  const FieldSpec f = a.field();
  DegreeWindow w(std::min(a.complex->window().lo, b.complex->window().lo),
                 std::max(a.complex->window().hi, b.complex->window().hi));
  TensorLayout t = tensor(a.complex, b.complex, w);
  ComplexPtr x = t.product();
  TensorLayout sq = tensor(x, x, w);

  std::map<int, Matrix> comp;
  for (int n = w.lo; n <= w.hi; ++n) {
    const auto& pairs = sq.factors(n);
    if (pairs.empty()) continue;
    Matrix m(x->dim(n), pairs.size(), f);
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto& [n1, i1, i2] = pairs[c];
      const auto& [pa1, ia1, ib1] = t.factors(n1)[i1];
      const auto& [pa2, ia2, ib2] = t.factors(n - n1)[i2];
      int pb1 = n1 - pa1, pb2 = n - n1 - pa2;
      auto ma = a.square.find(pa1 + pa2, pa1, ia1, ia2);
      auto mb = b.square.find(pb1 + pb2, pb1, ib1, ib2);
      if (!ma || !mb) continue;  // product truncates to zero above the window
      Scalar sign = koszul_sign(f, pb1, pa2);
      Matrix ca = a.mu.component(pa1 + pa2).column(*ma);
      Matrix cb = b.mu.component(pb1 + pb2).column(*mb);
      for (const auto& [ra, va] : ca.entries())
        for (const auto& [rb, vb] : cb.entries())
          if (auto at = t.find(n, pa1 + pa2, ra.first, rb.first))
            m.add_to(*at, c, sign * va * vb);
    }
    comp.emplace(n, std::move(m));
  }
  ChainMap mu(sq.product(), x, std::move(comp));

  std::size_t ua = a.eta.component(0).entries().begin()->first.first;
  std::size_t ub = b.eta.component(0).entries().begin()->first.first;
  Matrix um(x->dim(0), 1, f);
  um.set(t.index(0, 0, ua, ub), 0, Scalar::one(f));
  ChainMap eta(a.eta.source(), x, {{0, std::move(um)}});

  std::optional<ChainMap> aug;
  if (a.aug && b.aug) {
    Matrix am(1, x->dim(0), f);
    for (std::size_t c = 0; c < t.factors(0).size(); ++c) {
      const auto& [p, i, j] = t.factors(0)[c];
      Matrix ca = a.aug->component(p).column(i);
      Matrix cb = b.aug->component(-p).column(j);
      if (!ca.entries().empty() && !cb.entries().empty())
        am.set(0, c, ca.entries().begin()->second * cb.entries().begin()->second);
    }
    aug = ChainMap(x, a.aug->target(), {{0, std::move(am)}});
  }
  return TensorAlgebra{DGAlgebra{x, sq, std::move(mu), std::move(eta), std::move(aug)}, t};
}

CheckReport verify_degreewise_iso(const ChainMap& f) {
  CheckReport r;
  int lo = std::min(f.source()->window().lo, f.target()->window().lo);
  int hi = std::max(f.source()->window().hi, f.target()->window().hi);
  for (int n = lo; n <= hi; ++n) {
    std::size_t ds = f.source()->dim(n), dt = f.target()->dim(n);
    if (ds != dt) {
      r.fail("dimension mismatch at degree " + std::to_string(n) + ": " + std::to_string(ds) +
             " vs " + std::to_string(dt));
      continue;
    }
    if (ds > 0 && !f.component(n).is_invertible())
      r.fail("component not invertible at degree " + std::to_string(n));
  }
  return r;
}

namespace {
/* Column vectors of the stage-t ⊗ stage-s span inside the square layout at
 * total degree n. */
Matrix tensor_span(const TensorLayout& sq, const std::map<int, Matrix>& left,
                   const std::map<int, Matrix>& right, int n) {
  const FieldSpec f = sq.product()->field();
  std::vector<Matrix> cols;
  for (const auto& [p, lm] : left) {
    auto rit = right.find(n - p);
    if (rit == right.end()) continue;
    const Matrix& rm = rit->second;
    for (std::size_t u = 0; u < lm.cols(); ++u)
      for (std::size_t v = 0; v < rm.cols(); ++v) {
        Matrix w(sq.product()->dim(n), 1, f);
        for (const auto& [ia, ca] : lm.entries()) {
          if (ia.second != u) continue;
          for (const auto& [jb, cb] : rm.entries()) {
            if (jb.second != v) continue;
            auto at = sq.find(n, p, ia.first, jb.first);
            if (at) w.add_to(*at, 0, ca * cb);
          }
        }
        cols.push_back(std::move(w));
      }
  }
  Matrix span(sq.product()->dim(n), cols.size(), f);
  for (std::size_t c = 0; c < cols.size(); ++c) span.set_column(c, cols[c]);
  return span;
}
}  // namespace

CheckReport verify_split_conilpotent(const DGCoalgebra& c, const ConilpotentWitness& wtn) {
  CheckReport r;
  if (wtn.stages.empty()) throw WitnessError("empty conilpotent witness");
  if (!c.coaug) throw WitnessError("conilpotency needs a coaugmented coalgebra");
  const auto& x = c.complex;
  const FieldSpec f = x->field();
  auto stage_matrix = [&](std::size_t t, int n) {
    auto it = wtn.stages[t].find(n);
    if (it == wtn.stages[t].end()) return Matrix(x->dim(n), 0, f);
    if (it->second.rows() != x->dim(n))
      throw WitnessError("stage " + std::to_string(t) + " has wrong row count in degree " +
                         std::to_string(n));
    return it->second;
  };
  for (std::size_t t = 0; t < wtn.stages.size(); ++t) {
    for (int n = x->window().lo; n <= x->window().hi; ++n) {
      Matrix inc = stage_matrix(t, n);
      if (inc.cols() > 0 && inc.rank() != inc.cols())
        throw WitnessError("stage " + std::to_string(t) + " columns dependent in degree " +
                           std::to_string(n));
      if (t + 1 < wtn.stages.size()) {
        Matrix next = stage_matrix(t + 1, n);
        for (std::size_t u = 0; u < inc.cols(); ++u)
          if (!in_column_space(next, inc.column(u)))
            throw WitnessError("stage " + std::to_string(t) + " not contained in stage " +
                               std::to_string(t + 1) + " in degree " + std::to_string(n));
      }
    }
  }
  // Stage 0 is the coaugmentation image; the last stage is everything.
  Matrix coimg = c.coaug->component(0);
  Matrix s0 = stage_matrix(0, 0);
  if (s0.cols() != 1 || !in_column_space(s0, coimg.column(0)) ||
      !in_column_space(coimg, s0.column(0)))
    throw WitnessError("stage 0 is not the coaugmentation image");
  for (int n = x->window().lo; n <= x->window().hi; ++n) {
    if (n != 0 && stage_matrix(0, n).cols() != 0)
      throw WitnessError("stage 0 is not the coaugmentation image");
    if (stage_matrix(wtn.stages.size() - 1, n).rank() != x->dim(n))
      throw WitnessError("final stage does not exhaust the coalgebra in degree " +
                         std::to_string(n));
  }
  // Subcoalgebra and trivial-quotient conditions.
  for (std::size_t t = 0; t < wtn.stages.size(); ++t) {
    for (int n = x->window().lo; n <= x->window().hi; ++n) {
      Matrix inc = stage_matrix(t, n);
      if (inc.cols() == 0) continue;
      Matrix self_span = tensor_span(c.square, wtn.stages[t], wtn.stages[t], n);
      for (std::size_t u = 0; u < inc.cols(); ++u) {
        Matrix dv = c.delta.component(n) * inc.column(u);
        if (!in_column_space(self_span, dv))
          throw WitnessError("stage " + std::to_string(t) + " is not a subcoalgebra in degree " +
                             std::to_string(n));
      }
      if (t == 0) continue;
      Matrix lowhigh = tensor_span(c.square, wtn.stages[t - 1], wtn.stages[t], n);
      Matrix highlow = tensor_span(c.square, wtn.stages[t], wtn.stages[t - 1], n);
      Matrix mixed = lowhigh.hcat(highlow);
      for (std::size_t u = 0; u < inc.cols(); ++u) {
        Matrix dv = c.delta.component(n) * inc.column(u);
        if (!in_column_space(mixed, dv))
          r.fail("quotient comultiplication nonzero at stage " + std::to_string(t) +
                 ", degree " + std::to_string(n));
      }
    }
  }
  return r;
}

}  // namespace hhg
