#include "hhg/cobar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hhg/errors.hpp"

namespace hhg {

namespace {

using Letter = std::pair<int, std::size_t>;
using Letters = std::vector<Letter>;

Scalar sign_pow(const FieldSpec& f, long long e) {
  return koszul_sign(f, static_cast<int>(((e % 2) + 2) % 2), 1);
}

std::size_t unit_index(const ChainMap& eta) {
  const Matrix col = eta.component(0);
  if (col.is_zero()) throw ShapeError("unit map with empty image");
  return col.entries().begin()->first.first;
}

/* Structure-constant column a_i · a_j read off the algebra's own square
 * layout; a pair clipped out of the layout multiplies to zero, which the
 * window gates below keep outside every degree we certify. */
Matrix mu_pair(const DGAlgebra& a, int p, std::size_t i, int q, std::size_t j) {
  const auto at = a.square.find(p + q, p, i, j);
  if (!at) return Matrix(a.complex->dim(p + q), 1, a.field());
  const Matrix comp = a.mu.component(p + q);
  return comp.column(*at);
}

int letters_sdeg(const Letters& ls) {
  int s = 0;
  for (const auto& l : ls) s += l.first - 1;
  return s;
}

/* Letter labels carry the (de)suspension prefix; a label that already
 * contains a word separator is parenthesized so distinct words cannot
 * collide after joining. */
std::string wrap_letter(const std::string& prefix, const std::string& v) {
  if (v.find('|') == std::string::npos) return prefix + v;
  return prefix + "(" + v + ")";
}

std::string cobar_word_label(const ChainComplex& c, const Letters& ls) {
  if (ls.empty()) return "1";
  std::vector<std::string> parts;
  parts.reserve(ls.size());
  for (const auto& l : ls)
    parts.push_back(wrap_letter("s⁻¹", c.labels(l.first)[l.second]));
  return join_word(parts);
}

/* All letter sequences over the degree-shifted alphabet, indexed by total
 * shifted degree: `shift` is −1 for cobar letters (degrees ≥ 2 of C) and +1
 * for bar letters (degrees ≥ 1 of A). */
std::map<int, std::vector<Letters>> letter_words(const ComplexPtr& x, int shift,
                                                 int lowest, int top) {
  std::map<int, std::vector<Letters>> out;
  out[0] = {Letters{}};
  const int xtop = content_top(x);
  for (int u = 1; u <= top; ++u) {
    auto& list = out[u];
    for (int p = lowest; p <= xtop && p + shift <= u; ++p) {
      const std::size_t dp = x->dim(p);
      for (std::size_t i = 0; i < dp; ++i)
        for (const auto& rest : out[u - (p + shift)]) {
          Letters w;
          w.reserve(rest.size() + 1);
          w.push_back({p, i});
          w.insert(w.end(), rest.begin(), rest.end());
          list.push_back(std::move(w));
        }
    }
  }
  return out;
}

/* x ↦ Σ x_i ⊗ [] ⊗ c^i: the full coaction in word length zero. */
ChainMap rho_tilde_map(const CobarComplex& om) {
  const FieldSpec f = om.c.field();
  std::map<int, Matrix> comps;
  const int top = content_top(om.m.carrier);
  for (int nn = 0; nn <= top; ++nn) {
    const std::size_t dm = om.m.carrier->dim(nn);
    if (!dm) continue;
    Matrix mat(om.complex->dim(nn), dm, f);
    for (std::size_t i = 0; i < dm; ++i) {
      const Matrix col = om.m.coaction.component(nn).column(i);
      for (const auto& [rc, v] : col.entries()) {
        const auto fac = om.m.layout.factors(nn)[rc.first];
        const CobarWord t{fac.p, fac.i, {}, nn - fac.p, fac.j};
        const auto at = om.find(nn, t);
        if (!at)
          throw WindowTooSmall(
              "the window must cover the comodule content to hold its coaction image");
        mat.add_to(*at, i, v);
      }
    }
    comps[nn] = std::move(mat);
  }
  return ChainMap(om.m.carrier, om.complex, std::move(comps));
}

/* x ⊗ [] ⊗ c ↦ ε(c)·x, zero on positive word length. */
ChainMap pi_map(const CobarComplex& om) {
  const FieldSpec f = om.c.field();
  std::map<int, Matrix> comps;
  const Matrix eps0 = om.c.eps.component(0);
  for (const auto& [deg, list] : om.words) {
    if (list.empty()) continue;
    Matrix mat(om.m.carrier->dim(deg), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const CobarWord& e = list[col];
      if (!e.letters.empty() || e.np != 0) continue;
      const Scalar ev = eps0.at(0, e.ni);
      if (!ev.is_zero()) mat.add_to(e.mi, col, ev);
    }
    comps[deg] = std::move(mat);
  }
  return ChainMap(om.complex, om.m.carrier, std::move(comps));
}

}  // namespace

/* ------------------------------------------------------------------ */
/* Comodules                                                           */
/* ------------------------------------------------------------------ */

CheckReport verify_ccomodule(const CComodule& m, const DGCoalgebra& c) {
  CheckReport r;
  const FieldSpec f = c.field();
  if (m.carrier->field() != f) {
    r.fail("comodule and coalgebra live over different fields");
    return r;
  }
  const bool right = (m.side == Side::Right);
  if (right) {
    if (!same_space(m.layout.left(), m.carrier) ||
        !same_space(m.layout.right(), c.complex)) {
      r.fail("right-comodule layout is not carrier ⊗ coalgebra");
      return r;
    }
  } else {
    if (!same_space(m.layout.left(), c.complex) ||
        !same_space(m.layout.right(), m.carrier)) {
      r.fail("left-comodule layout is not coalgebra ⊗ carrier");
      return r;
    }
  }
  if (!same_space(m.coaction.source(), m.carrier) ||
      !same_space(m.coaction.target(), m.layout.product())) {
    r.fail("coaction endpoints do not match the layout");
    return r;
  }

  const Matrix eps0 = c.eps.component(0);
  const int top = content_top(m.carrier);
  for (int nn = m.carrier->window().lo; nn <= top; ++nn) {
    const std::size_t dm = m.carrier->dim(nn);
    for (std::size_t i = 0; i < dm; ++i) {
      const Matrix col = m.coaction.component(nn).column(i);

      /* Counit law: (1⊗ε)ρ = id (resp. (ε⊗1)λ = id). */
      Matrix acc(dm, 1, f);
      for (const auto& [rc, v] : col.entries()) {
        const auto fac = m.layout.factors(nn)[rc.first];
        if (right) {
          if (nn - fac.p != 0) continue;  // ε lives in degree 0
          const Scalar ev = eps0.at(0, fac.j);
          if (!ev.is_zero()) acc.add_to(fac.i, 0, v * ev);
        } else {
          if (fac.p != 0) continue;
          const Scalar ev = eps0.at(0, fac.i);
          if (!ev.is_zero()) acc.add_to(fac.j, 0, v * ev);
        }
      }
      if (acc != Matrix::basis_vector(dm, i, f))
        r.fail("counit law fails on " + m.carrier->labels(nn)[i]);

      /* Coassociativity, as triples (carrier part, C part, C part). */
      using Key = std::tuple<int, std::size_t, int, std::size_t, std::size_t>;
      std::map<Key, Scalar> lhs, rhs;
      auto put = [&f](std::map<Key, Scalar>& tgt, const Key& k, const Scalar& v) {
        auto it = tgt.find(k);
        if (it == tgt.end())
          tgt.emplace(k, v);
        else
          it->second = it->second + v;
      };
      for (const auto& [rc, v] : col.entries()) {
        const auto fac = m.layout.factors(nn)[rc.first];
        if (right) {
          const int q = nn - fac.p;
          /* (ρ⊗1)ρ: expand the carrier part again. */
          const Matrix col2 = m.coaction.component(fac.p).column(fac.i);
          for (const auto& [rc2, v2] : col2.entries()) {
            const auto fac2 = m.layout.factors(fac.p)[rc2.first];
            put(lhs, {fac2.p, fac2.i, fac.p - fac2.p, fac2.j, fac.j}, v * v2);
          }
          /* (1⊗Δ)ρ: expand the C part. */
          const Matrix dl = c.delta.component(q).column(fac.j);
          for (const auto& [rc2, v2] : dl.entries()) {
            const auto fac2 = c.square.factors(q)[rc2.first];
            put(rhs, {fac.p, fac.i, fac2.p, fac2.i, fac2.j}, v * v2);
          }
        } else {
          const int q = fac.p;  // C degree (left factor)
          /* (1⊗λ)λ: expand the carrier part again. */
          const Matrix col2 = m.coaction.component(nn - q).column(fac.j);
          for (const auto& [rc2, v2] : col2.entries()) {
            const auto fac2 = m.layout.factors(nn - q)[rc2.first];
            put(lhs, {nn - q - fac2.p, fac2.j, q, fac.i, fac2.i}, v * v2);
          }
          /* (Δ⊗1)λ: expand the C part. */
          const Matrix dl = c.delta.component(q).column(fac.i);
          for (const auto& [rc2, v2] : dl.entries()) {
            const auto fac2 = c.square.factors(q)[rc2.first];
            put(rhs, {nn - q, fac.j, fac2.p, fac2.i, fac2.j}, v * v2);
          }
        }
      }
      auto normalize = [](std::map<Key, Scalar>& t) {
        for (auto it = t.begin(); it != t.end();)
          it = it->second.is_zero() ? t.erase(it) : std::next(it);
      };
      normalize(lhs);
      normalize(rhs);
      if (lhs != rhs)
        r.fail("coassociativity fails on " + m.carrier->labels(nn)[i]);
    }
  }
  return r;
}

CComodule trivial_ccomodule(const DGCoalgebra& c, const ComplexPtr& m, Side side) {
  if (!c.coaug) throw AxiomError("trivial coaction needs a coaugmented coalgebra");
  if (m->field() != c.field())
    throw FieldMismatch("comodule carrier and coalgebra over different fields");
  if (side == Side::Right) {
    TensorLayout t = tensor(m, c.complex, hull_window(m, c.complex));
    ChainMap rho = insert_unit_right(t, *c.coaug);
    return CComodule{m, Side::Right, t, rho};
  }
  TensorLayout t = tensor(c.complex, m, hull_window(c.complex, m));
  ChainMap rho = insert_unit_left(t, *c.coaug);
  return CComodule{m, Side::Left, t, rho};
}

CComodule self_ccomodule(const DGCoalgebra& c, Side side) {
  return CComodule{c.complex, side, c.square, c.delta};
}

CComodule comod_algebra_ccomodule(const ComodAlgebra& ca) {
  return CComodule{ca.a.complex, Side::Right, ca.ah, ca.rho};
}

CComodule flip_ccomodule(const DGCoalgebra& c, const CComodule& m) {
  CComodule out;
  out.carrier = m.carrier;
  if (m.side == Side::Right) {
    out.side = Side::Left;
    out.layout = tensor(c.complex, m.carrier, m.layout.product()->window());
  } else {
    out.side = Side::Right;
    out.layout = tensor(m.carrier, c.complex, m.layout.product()->window());
  }
  out.coaction = symmetry(m.layout, out.layout).compose(m.coaction);
  const CheckReport r = verify_ccomodule(out, c);
  if (!r.passed())
    throw AxiomError("the flipped coaction is not a comodule: " + r.failures.front());
  return out;
}

/* ------------------------------------------------------------------ */
/* The cobar complex                                                   */
/* ------------------------------------------------------------------ */

const CobarWord& CobarComplex::word(int degree, std::size_t i) const {
  const auto it = words.find(degree);
  if (it == words.end() || i >= it->second.size())
    throw ShapeError("cobar word index out of range");
  return it->second[i];
}

std::optional<std::size_t> CobarComplex::find(int degree, const CobarWord& w) const {
  const auto it = index_.find(degree);
  if (it == index_.end()) return std::nullopt;
  const auto jt = it->second.find(w);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

CobarComplex cobar(const CComodule& m, const DGCoalgebra& c, const CComodule& n,
                   const DegreeWindow& w) {
  const FieldSpec f = c.field();
  if (m.carrier->field() != f || n.carrier->field() != f)
    throw FieldMismatch("cobar inputs live over different fields");
  if (m.side != Side::Right) throw ShapeError("cobar: m must be a right comodule");
  if (n.side != Side::Left) throw ShapeError("cobar: n must be a left comodule");
  if (!c.coaug) throw AxiomError("cobar needs a coaugmented coalgebra");
  if (!is_simply_connected(c.complex, *c.coaug))
    throw NonSimplyConnected(
        "cobar letters must sit in degrees >= 2: the coalgebra needs its unit "
        "alone in degree 0 and nothing in degree 1");
  for (int p = std::min(m.carrier->window().lo, n.carrier->window().lo); p < 0; ++p)
    if (m.carrier->dim(p) || n.carrier->dim(p))
      throw ShapeError("cobar comodules must be concentrated in degrees >= 0");
  if (w.hi - 1 < w.lo)
    throw WindowTooSmall("cobar window leaves no trusted degrees");
  {
    const CheckReport rm = verify_ccomodule(m, c);
    if (!rm.passed()) throw AxiomError("cobar input m: " + rm.failures.front());
    const CheckReport rn = verify_ccomodule(n, c);
    if (!rn.passed()) throw AxiomError("cobar input n: " + rn.failures.front());
  }

  CobarComplex out;
  out.m = m;
  out.n = n;
  out.c = c;
  out.trusted = TrustedRange(w.lo, w.hi - 1);

  const int hi = w.hi;
  const auto by_deg = letter_words(c.complex, -1, 2, hi);
  const int mtop = content_top(m.carrier), ntop = content_top(n.carrier);

  std::map<int, std::vector<std::string>> basis;
  for (int deg = 0; deg <= hi; ++deg) {
    auto& list = out.words[deg];
    std::vector<std::string> labels;
    for (int mp = 0; mp <= std::min(deg, mtop); ++mp) {
      const std::size_t dm = m.carrier->dim(mp);
      for (std::size_t mi = 0; mi < dm; ++mi)
        for (int u = 0; u <= deg - mp; ++u) {
          const int np = deg - mp - u;
          if (np > ntop) continue;
          const std::size_t dn = n.carrier->dim(np);
          if (!dn) continue;
          const auto it = by_deg.find(u);
          if (it == by_deg.end()) continue;
          for (const auto& ls : it->second) {
            const std::string wl = cobar_word_label(*c.complex, ls);
            for (std::size_t ni = 0; ni < dn; ++ni) {
              CobarWord e{mp, mi, ls, np, ni};
              out.index_[deg][e] = list.size();
              list.push_back(std::move(e));
              labels.push_back(tensor_label(
                  m.carrier->labels(mp)[mi],
                  tensor_label(wl, n.carrier->labels(np)[ni])));
            }
          }
        }
    }
    if (!labels.empty()) basis[deg] = std::move(labels);
  }

  GradedVectorSpace space(f, DegreeWindow(std::min(w.lo, 0) - 1, hi), basis);

  std::map<int, Matrix> d;
  for (int deg = 1; deg <= hi; ++deg) {
    const auto& list = out.words[deg];
    if (list.empty()) continue;
    Matrix dn(space.dim(deg - 1), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const CobarWord& e = list[col];
      auto put = [&](const CobarWord& t, const Scalar& v) {
        const auto at = out.find(deg - 1, t);
        if (!at) throw ShapeError("cobar differential left the enumerated basis");
        dn.add_to(*at, col, v);
      };
      const int lw = deg - e.np;  // degree of everything left of the N slot

      /* (1) internal differential of the M part. */
      {
        const Matrix dm = m.carrier->d(e.mp).column(e.mi);
        for (const auto& [rc, v] : dm.entries()) {
          CobarWord t = e;
          t.mp -= 1;
          t.mi = rc.first;
          put(t, v);
        }
      }
      /* (2) internal differentials of the letters, with −s⁻¹d per slot. */
      {
        int pre = e.mp;
        for (std::size_t j = 0; j < e.letters.size(); ++j) {
          const auto [dj, ij] = e.letters[j];
          const Matrix dc = c.complex->d(dj).column(ij);
          if (!dc.is_zero()) {
            const Scalar s = sign_pow(f, pre + 1);
            for (const auto& [rc, v] : dc.entries()) {
              CobarWord t = e;
              t.letters[j] = {dj - 1, rc.first};
              put(t, s * v);
            }
          }
          pre += dj - 1;
        }
      }
      /* (3) internal differential of the N part. */
      {
        const Matrix dm = n.carrier->d(e.np).column(e.ni);
        if (!dm.is_zero()) {
          const Scalar s = sign_pow(f, lw);
          for (const auto& [rc, v] : dm.entries()) {
            CobarWord t = e;
            t.np -= 1;
            t.ni = rc.first;
            put(t, s * v);
          }
        }
      }
      /* (4) the reduced M coaction becomes a new first letter. */
      {
        const Matrix rho = m.coaction.component(e.mp).column(e.mi);
        for (const auto& [rc, v] : rho.entries()) {
          const auto fac = m.layout.factors(e.mp)[rc.first];
          const int q = e.mp - fac.p;
          if (q < 2) continue;  // π̄ kills the unit part; degree 1 is empty
          CobarWord t = e;
          t.mp = fac.p;
          t.mi = fac.i;
          t.letters.insert(t.letters.begin(), {q, fac.j});
          put(t, sign_pow(f, fac.p + 1) * v);
        }
      }
      /* (5) letterwise reduced comultiplication. */
      {
        int pre = e.mp;
        for (std::size_t j = 0; j < e.letters.size(); ++j) {
          const auto [dj, ij] = e.letters[j];
          const Matrix dl = c.delta.component(dj).column(ij);
          for (const auto& [rc, v] : dl.entries()) {
            const auto fac = c.square.factors(dj)[rc.first];
            const int p1 = fac.p, p2 = dj - fac.p;
            if (p1 < 2 || p2 < 2) continue;
            CobarWord t = e;
            t.letters[j] = {p1, fac.i};
            t.letters.insert(t.letters.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                             {p2, fac.j});
            put(t, sign_pow(f, pre) * sign_pow(f, p1) * v);
          }
          pre += dj - 1;
        }
      }
      /* (6) the reduced N coaction becomes a new last letter. */
      {
        const Matrix lam = n.coaction.component(e.np).column(e.ni);
        for (const auto& [rc, v] : lam.entries()) {
          const auto fac = n.layout.factors(e.np)[rc.first];
          if (fac.p < 2) continue;
          CobarWord t = e;
          t.letters.push_back({fac.p, fac.i});
          t.np = e.np - fac.p;
          t.ni = fac.j;
          put(t, sign_pow(f, lw) * v);
        }
      }
    }
    d[deg] = std::move(dn);
  }

  out.complex = ChainComplex::make(std::move(space), std::move(d));
  return out;
}

CComodule cobar_last_factor_comodule(const CobarComplex& om) {
  if (!same_space(om.n.carrier, om.c.complex) ||
      !om.n.coaction.equals(om.c.delta))
    throw ShapeError(
        "the last-factor coaction needs the self-comodule in the right slot");
  const FieldSpec f = om.c.field();
  TensorLayout t = tensor(om.complex, om.c.complex, om.complex->window());
  std::map<int, Matrix> comps;
  for (const auto& [deg, list] : om.words) {
    if (list.empty()) continue;
    Matrix mat(t.product()->dim(deg), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const CobarWord& e = list[col];
      const Matrix dl = om.c.delta.component(e.np).column(e.ni);
      for (const auto& [rc, v] : dl.entries()) {
        const auto fac = om.c.square.factors(e.np)[rc.first];
        const int p2 = e.np - fac.p;
        CobarWord tw = e;
        tw.np = fac.p;
        tw.ni = fac.i;
        const auto wi = om.find(deg - p2, tw);
        if (!wi) throw ShapeError("last-factor coaction left the basis");
        const auto ti = t.find(deg, deg - p2, *wi, fac.j);
        if (!ti) throw ShapeError("last-factor coaction left the layout");
        mat.add_to(*ti, col, v);
      }
    }
    comps[deg] = std::move(mat);
  }
  ChainMap rho(om.complex, t.product(), std::move(comps));
  return CComodule{om.complex, Side::Right, t, rho};
}

SubComplex ccomodule_coinvariants(const CComodule& m, const DGCoalgebra& c) {
  if (m.side != Side::Right)
    throw ShapeError("coinvariants expect a right comodule");
  if (!c.coaug) throw AxiomError("coinvariants need a coaugmented coalgebra");
  return equalizer(m.coaction, insert_unit_right(m.layout, *c.coaug));
}

/* ------------------------------------------------------------------ */
/* The cofree resolution                                               */
/* ------------------------------------------------------------------ */

CobarResolution cobar_resolution(const CComodule& m, const DGCoalgebra& c,
                                 const DegreeWindow& w) {
  const FieldSpec f = c.field();
  CobarResolution res;
  res.omega = cobar(m, c, self_ccomodule(c, Side::Left), w);
  res.zero_side = cobar(m, c, trivial_ccomodule(c, unit_complex(f), Side::Left), w);
  const CobarComplex& om = res.omega;
  const int hi = w.hi;

  res.rho_tilde = rho_tilde_map(om);

  /* q: kill positive word length, keep x ⊗ [] ⊗ c as x ⊗ c. */
  {
    std::map<int, Matrix> comps;
    for (const auto& [deg, list] : om.words) {
      if (list.empty()) continue;
      Matrix mat(m.layout.product()->dim(deg), list.size(), f);
      for (std::size_t col = 0; col < list.size(); ++col) {
        const CobarWord& e = list[col];
        if (!e.letters.empty()) continue;
        const auto ti = m.layout.find(deg, e.mp, e.mi, e.ni);
        if (!ti)
          throw WindowTooSmall("the comodule layout window cannot hold q's image");
        mat.add_to(*ti, col, Scalar::one(f));
      }
      comps[deg] = std::move(mat);
    }
    res.q = ChainMap(om.complex, m.layout.product(), std::move(comps));
  }

  res.pi = pi_map(om);
  if (!res.pi.compose(res.rho_tilde).equals(ChainMap::identity(m.carrier)))
    throw AxiomError("pi ∘ rho_tilde is not the identity");

  /* The contraction pops the last letter into the counit-evaluated slot;
   * it raises degree by one, so its top component is clipped and the
   * identity is certified on every degree below the window top. */
  {
    const Matrix eps0 = c.eps.component(0);
    std::map<int, Matrix> comps;
    for (const auto& [deg, list] : om.words) {
      if (list.empty() || deg >= hi) continue;
      Matrix mat(om.complex->dim(deg + 1), list.size(), f);
      for (std::size_t col = 0; col < list.size(); ++col) {
        const CobarWord& e = list[col];
        if (e.letters.empty() || e.np != 0) continue;
        const Scalar ev = eps0.at(0, e.ni);
        if (ev.is_zero()) continue;
        const auto [dk, ik] = e.letters.back();
        CobarWord t = e;
        t.letters.pop_back();
        t.np = dk;
        t.ni = ik;
        const auto at = om.find(deg + 1, t);
        if (!at) throw ShapeError("contraction left the enumerated basis");
        const Scalar s = sign_pow(f, e.mp + letters_sdeg(e.letters) - (dk - 1));
        mat.add_to(*at, col, s * ev);
      }
      comps[deg] = std::move(mat);
    }
    const GradedMap h(om.complex, om.complex, 1, std::move(comps));
    const ChainMap rp = res.rho_tilde.compose(res.pi);
    const GradedMap dd = GradedMap::differential(om.complex);
    const GradedMap lhs = dd.compose(h) + h.compose(dd);
    const GradedMap rhs = GradedMap::identity(om.complex) - rp.graded();
    for (int nn = om.complex->window().lo; nn < hi; ++nn)
      if (lhs.component(nn) != rhs.component(nn))
        throw AxiomError("contraction identity fails in degree " + std::to_string(nn));
    res.contraction = ChainHomotopy{ChainMap::identity(om.complex), rp, h};
  }

  /* Identify Omega(M;C;R) with the coinvariants of the last factor. */
  res.coinv = ccomodule_coinvariants(cobar_last_factor_comodule(om), c);
  {
    const Matrix cg = c.coaug->component(0);
    std::map<int, Matrix> comps;
    for (const auto& [deg, list] : res.zero_side.words) {
      if (list.empty()) continue;
      Matrix mat(om.complex->dim(deg), list.size(), f);
      for (std::size_t col = 0; col < list.size(); ++col) {
        const CobarWord& e = list[col];
        for (const auto& [rc, v] : cg.entries()) {
          CobarWord t = e;
          t.np = 0;
          t.ni = rc.first;
          const auto at = om.find(deg, t);
          if (!at) throw ShapeError("coinvariants inclusion left the basis");
          mat.add_to(*at, col, v);
        }
      }
      comps[deg] = std::move(mat);
    }
    ChainMap iota(res.zero_side.complex, om.complex, std::move(comps));
    res.coinv_iso = corestrict(res.coinv, iota);
    const CheckReport ir = verify_degreewise_iso(res.coinv_iso);
    if (!ir.passed())
      throw AxiomError("coinvariants identification failed: " + ir.failures.front());
  }
  return res;
}

/* ------------------------------------------------------------------ */
/* Cobar multiplication                                                */
/* ------------------------------------------------------------------ */

namespace {

/* Shared data for the straightening product. */
struct MulContext {
  const CobarComplex* om;
  const DGAlgebra* malg;  // algebra on the m carrier
  const DGAlgebra* nalg;  // algebra on the n carrier
  const DGAlgebra* halg;  // the bialgebra's algebra (letters multiply here)
  FieldSpec f;
};

/* A partially straightened left piece: coefficient, m-part, letters that
 * already sit to its right. */
struct APiece {
  Scalar c;
  int p;
  std::size_t i;
  Letters w;
};

/* A partially straightened right piece: letters already deposited, then the
 * continuing right-slot element. */
struct EPiece {
  Scalar c;
  Letters w;
  int p;
  std::size_t i;
};

std::vector<APiece> merge_like(std::vector<APiece>&& v, const FieldSpec& f) {
  std::map<std::tuple<int, std::size_t, Letters>, Scalar> acc;
  for (auto& s : v) {
    const auto k = std::make_tuple(s.p, s.i, std::move(s.w));
    auto it = acc.find(k);
    if (it == acc.end())
      acc.emplace(k, s.c);
    else
      it->second = it->second + s.c;
  }
  std::vector<APiece> out;
  for (auto& [k, c0] : acc)
    if (!c0.is_zero())
      out.push_back(APiece{c0, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
  (void)f;
  return out;
}

std::vector<EPiece> merge_like(std::vector<EPiece>&& v, const FieldSpec& f) {
  std::map<std::tuple<Letters, int, std::size_t>, Scalar> acc;
  for (auto& s : v) {
    const auto k = std::make_tuple(std::move(s.w), s.p, s.i);
    auto it = acc.find(k);
    if (it == acc.end())
      acc.emplace(k, s.c);
    else
      it->second = it->second + s.c;
  }
  std::vector<EPiece> out;
  for (auto& [k, c0] : acc)
    if (!c0.is_zero())
      out.push_back(EPiece{c0, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
  (void)f;
  return out;
}

/* Walk an m-part element leftwards through a letter word: each crossing
 * expands the coaction ρ(a) = a_i ⊗ a^i and merges the coaction's H part
 * into the letter, with sign (−1)^{(|h|+1)|a_i|}. */
std::vector<APiece> cross_left(const MulContext& cx, const Letters& w, int pa,
                               std::size_t ia) {
  std::vector<APiece> states{{Scalar::one(cx.f), pa, ia, {}}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto [dl, il] = *it;
    std::vector<APiece> next;
    for (const auto& st : states) {
      const Matrix rho = cx.om->m.coaction.component(st.p).column(st.i);
      for (const auto& [rc, v] : rho.entries()) {
        const auto fac = cx.om->m.layout.factors(st.p)[rc.first];
        const int hq = st.p - fac.p;
        const Matrix mu = mu_pair(*cx.halg, dl, il, hq, fac.j);
        if (mu.is_zero()) continue;
        const Scalar s =
            st.c * sign_pow(cx.f, static_cast<long long>(dl + 1) * fac.p) * v;
        for (const auto& [rc2, v2] : mu.entries()) {
          APiece ns{s * v2, fac.p, fac.i, {}};
          ns.w.reserve(st.w.size() + 1);
          ns.w.push_back({dl + hq, rc2.first});
          ns.w.insert(ns.w.end(), st.w.begin(), st.w.end());
          next.push_back(std::move(ns));
        }
      }
    }
    states = merge_like(std::move(next), cx.f);
  }
  return states;
}

/* Walk the right-slot element rightwards through a letter word: each
 * crossing expands the left coaction λ(n) = h_i ⊗ n^i and merges h_i into
 * the letter, with sign (−1)^{|n^i|(|h|+1)+|h_i|}. */
std::vector<EPiece> cross_right(const MulContext& cx, int pn, std::size_t in,
                                const Letters& w) {
  std::vector<EPiece> states{{Scalar::one(cx.f), {}, pn, in}};
  for (const auto& [dl, il] : w) {
    std::vector<EPiece> next;
    for (const auto& st : states) {
      const Matrix lam = cx.om->n.coaction.component(st.p).column(st.i);
      for (const auto& [rc, v] : lam.entries()) {
        const auto fac = cx.om->n.layout.factors(st.p)[rc.first];
        const int hq = fac.p;
        const int nq = st.p - hq;
        const Matrix mu = mu_pair(*cx.halg, hq, fac.i, dl, il);
        if (mu.is_zero()) continue;
        const Scalar s =
            st.c *
            sign_pow(cx.f, static_cast<long long>(nq) * (dl + 1) + hq) * v;
        for (const auto& [rc2, v2] : mu.entries()) {
          EPiece ns{s * v2, st.w, nq, fac.j};
          ns.w.push_back({hq + dl, rc2.first});
          next.push_back(std::move(ns));
        }
      }
    }
    states = merge_like(std::move(next), cx.f);
  }
  return states;
}

/* The straightened product of two basis words, accumulated into a column. */
void accumulate_product(const MulContext& cx, const CobarWord& e,
                        const CobarWord& e2, int total, Matrix& col) {
  const Scalar flip =
      sign_pow(cx.f, static_cast<long long>(e.np) * e2.mp);
  const auto aparts = cross_left(cx, e.letters, e2.mp, e2.mi);
  if (aparts.empty()) return;
  const auto eparts = cross_right(cx, e.np, e.ni, e2.letters);
  for (const auto& ap : aparts) {
    const Matrix am = mu_pair(*cx.malg, e.mp, e.mi, ap.p, ap.i);
    if (am.is_zero()) continue;
    for (const auto& ep : eparts) {
      const Matrix nm = mu_pair(*cx.nalg, ep.p, ep.i, e2.np, e2.ni);
      if (nm.is_zero()) continue;
      const Scalar base = flip * ap.c * ep.c;
      for (const auto& [arc, av] : am.entries())
        for (const auto& [nrc, nv] : nm.entries()) {
          CobarWord t;
          t.mp = e.mp + ap.p;
          t.mi = arc.first;
          t.letters = ap.w;
          t.letters.insert(t.letters.end(), ep.w.begin(), ep.w.end());
          t.np = ep.p + e2.np;
          t.ni = nrc.first;
          const auto at = cx.om->find(total, t);
          if (!at) throw ShapeError("cobar product left the enumerated basis");
          col.add_to(*at, 0, base * av * nv);
        }
    }
  }
}

}  // namespace

CobarAlgebra cobar_multiplication(const ComodAlgebra& ca, CobarVariant variant,
                                  const DegreeWindow& w) {
  const FieldSpec f = ca.h.field();
  {
    const CheckReport r = verify_comod_algebra(ca);
    if (!r.passed())
      throw AxiomError("cobar multiplication input: " + r.failures.front());
  }
  const DGBialgebra gnd = ground_field_bialgebra(f);

  /* Window gates: every structure-constant lookup below stays exact. */
  const int htop = content_top(ca.h.complex());
  const int atop = content_top(ca.a.complex);
  if (ca.h.alg.square.product()->window().hi < std::min(2 * htop, w.hi + 1))
    throw WindowTooSmall(
        "the bialgebra square window cannot certify letter products on this window");
  if (ca.a.square.product()->window().hi < std::min(2 * atop, w.hi))
    throw WindowTooSmall(
        "the algebra square window cannot certify products on this window");

  CobarAlgebra out;
  out.variant = variant;
  out.coeff = ca.a;
  DGAlgebra malg, nalg;
  switch (variant) {
    case CobarVariant::Left:
      out.omega = cobar(comod_algebra_ccomodule(ca), ca.h.coalg,
                        trivial_ccomodule(ca.h.coalg, unit_complex(f), Side::Left), w);
      malg = ca.a;
      nalg = gnd.alg;
      break;
    case CobarVariant::Right:
      out.omega = cobar(trivial_ccomodule(ca.h.coalg, unit_complex(f), Side::Right),
                        ca.h.coalg,
                        flip_ccomodule(ca.h.coalg, comod_algebra_ccomodule(ca)), w);
      malg = gnd.alg;
      nalg = ca.a;
      break;
    case CobarVariant::TwoSided:
      out.omega = cobar(comod_algebra_ccomodule(ca), ca.h.coalg,
                        self_ccomodule(ca.h.coalg, Side::Left), w);
      malg = ca.a;
      nalg = ca.h.alg;
      break;
  }
  const CobarComplex& om = out.omega;
  const MulContext cx{&om, &malg, &nalg, &ca.h.alg, f};

  TensorLayout square = tensor(om.complex, om.complex, om.complex->window());
  std::map<int, Matrix> mucomp;
  for (int deg = 0; deg <= w.hi; ++deg) {
    const auto facs = square.factors(deg);
    if (facs.empty()) continue;
    Matrix mat(om.complex->dim(deg), facs.size(), f);
    for (std::size_t cidx = 0; cidx < facs.size(); ++cidx) {
      const auto& fc = facs[cidx];
      Matrix col(mat.rows(), 1, f);
      accumulate_product(cx, om.word(fc.p, fc.i), om.word(deg - fc.p, fc.j), deg,
                         col);
      mat.set_column(cidx, col);
    }
    mucomp[deg] = std::move(mat);
  }
  ChainMap mu(square.product(), om.complex, std::move(mucomp));

  std::map<int, Matrix> etacomp;
  {
    Matrix ecol(om.complex->dim(0), 1, f);
    const Matrix am = malg.eta.component(0);
    const Matrix nm = nalg.eta.component(0);
    for (const auto& [arc, av] : am.entries())
      for (const auto& [nrc, nv] : nm.entries()) {
        const CobarWord t{0, arc.first, {}, 0, nrc.first};
        const auto at = om.find(0, t);
        if (!at) throw ShapeError("cobar unit missing from the basis");
        ecol.add_to(*at, 0, av * nv);
      }
    etacomp[0] = std::move(ecol);
  }
  ChainMap eta(unit_complex(f), om.complex, std::move(etacomp));

  std::optional<ChainMap> aug;
  if (malg.aug && nalg.aug) {
    const Matrix ma = malg.aug->component(0);
    const Matrix na = nalg.aug->component(0);
    Matrix arow(1, om.complex->dim(0), f);
    const auto& list = om.words.at(0);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const CobarWord& e = list[col];
      const Scalar v = ma.at(0, e.mi) * na.at(0, e.ni);
      if (!v.is_zero()) arow.set(0, col, v);
    }
    aug = ChainMap(om.complex, unit_complex(f), {{0, arow}});
  }

  out.alg = DGAlgebra{om.complex, square, mu, eta, aug};
  {
    const CheckReport r = verify_dg_structure(out.alg);
    if (!r.passed())
      throw AxiomError("cobar multiplication failed verification: " +
                       r.failures.front());
  }
  out.sign_reports = {
      "letter crossing: s⁻¹(h)·a = Σ (−1)^{(|h|+1)|a_i|} a_i·s⁻¹(π̄(h a^i)) over ρ(a) = a_i ⊗ a^i",
      "right-slot crossing: n·s⁻¹(h) = Σ (−1)^{|n^i|(|h|+1)+|h_i|} s⁻¹(π̄(h_i h))·n^i over λ(n) = h_i ⊗ n^i",
      "right slot past an m-part element: plain Koszul flip (−1)^{|n||a|}, no coaction twist",
  };

  if (variant == CobarVariant::TwoSided) {
    const CComodule lf = cobar_last_factor_comodule(om);
    ComodAlgebra ca2{ca.h, out.alg, lf.layout, lf.coaction};
    {
      const CheckReport r = verify_comod_algebra(ca2);
      if (!r.passed())
        throw AxiomError("two-sided cobar coaction: " + r.failures.front());
    }
    out.comod = ca2;

    ChainMap rt = rho_tilde_map(om);
    {
      const CheckReport r = verify_algebra_morphism(rt, ca.a, out.alg);
      if (!r.passed())
        throw AxiomError("rho_tilde is not an algebra map: " + r.failures.front());
    }
    out.rho_tilde = rt;

    const TensorAlgebra ah = tensor_product_algebra(ca.a, ca.h.alg);
    {
      std::map<int, Matrix> comps;
      for (const auto& [deg, list] : om.words) {
        if (list.empty()) continue;
        Matrix mat(ah.alg.complex->dim(deg), list.size(), f);
        for (std::size_t col = 0; col < list.size(); ++col) {
          const CobarWord& e = list[col];
          if (!e.letters.empty()) continue;
          const auto ti = ah.layout.find(deg, e.mp, e.mi, e.ni);
          if (!ti)
            throw WindowTooSmall(
                "the tensor-product-algebra window cannot hold q's image");
          mat.add_to(*ti, col, Scalar::one(f));
        }
        comps[deg] = std::move(mat);
      }
      ChainMap qm(om.complex, ah.alg.complex, std::move(comps));
      const CheckReport r = verify_algebra_morphism(qm, out.alg, ah.alg);
      if (!r.passed())
        throw AxiomError("q is not an algebra map: " + r.failures.front());
      out.q = qm;
    }

    ChainMap pm = pi_map(om);
    if (!pm.compose(rt).equals(ChainMap::identity(ca.a.complex)))
      throw AxiomError("pi ∘ rho_tilde is not the identity");
    out.pi = pm;
  }
  return out;
}

/* ------------------------------------------------------------------ */
/* Homotopy coinvariants                                               */
/* ------------------------------------------------------------------ */

CobarAlgebra hco_model(const ComodAlgebra& ca, const DegreeWindow& w) {
  return cobar_multiplication(ca, CobarVariant::Left, w);
}

DGAlgebra hco(const ComodAlgebra& ca, const DegreeWindow& w) {
  return hco_model(ca, w).alg;
}

HcoMapResult hco_map(const ComodAlgMorphism& m, const DegreeWindow& w,
                     const std::optional<ChainMap>& witness) {
  {
    const CheckReport r = verify_comod_alg_morphism(m);
    if (!r.passed()) throw AxiomError("hco_map input: " + r.failures.front());
  }
  HcoMapResult out;
  out.src = hco_model(m.src, w);
  out.tgt = hco_model(m.tgt, w);
  const FieldSpec f = m.src.h.field();

  /* φ applied to the m part, letters and right slot carried over. */
  auto pointwise_phi = [&]() {
    std::map<int, Matrix> comps;
    for (const auto& [deg, list] : out.src.omega.words) {
      if (list.empty()) continue;
      Matrix mat(out.tgt.omega.complex->dim(deg), list.size(), f);
      for (std::size_t col = 0; col < list.size(); ++col) {
        const CobarWord& e = list[col];
        const Matrix pc = m.phi.map.component(e.mp).column(e.mi);
        for (const auto& [rc, v] : pc.entries()) {
          CobarWord t = e;
          t.mi = rc.first;
          const auto at = out.tgt.omega.find(deg, t);
          if (!at) throw ShapeError("hco comparison left the enumerated basis");
          mat.add_to(*at, col, v);
        }
      }
      comps[deg] = std::move(mat);
    }
    return ChainMap(out.src.omega.complex, out.tgt.omega.complex,
                    std::move(comps));
  };

  const DGBialgebra& bh = m.gamma.src;
  const DGBialgebra& bk = m.gamma.tgt;
  ChainMap cmap;
  if (same_space(bh.complex(), bk.complex()) &&
      m.gamma.map.equals(ChainMap::identity(bh.complex()))) {
    cmap = pointwise_phi();
    out.supported_case = "gamma = id";
  } else if (content_top(bh.complex()) == 0) {
    cmap = pointwise_phi();
    out.supported_case = "gamma = eta";
  } else if (witness) {
    if (!same_space(witness->source(), out.src.omega.complex) ||
        !same_space(witness->target(), out.tgt.omega.complex))
      throw ShapeError("hco comparison witness endpoints do not match the models");
    cmap = *witness;
    out.supported_case = "user witness";
  } else {
    throw UnsupportedGamma(
        "the bialgebra map is neither the identity nor the coaugmentation; "
        "supply a comparison-map witness between the two models");
  }
  out.report = verify_algebra_morphism(cmap, out.src.alg, out.tgt.alg);
  if (!out.report.passed())
    throw AxiomError("hco comparison is not an algebra map: " +
                     out.report.failures.front());
  out.map = cmap;
  return out;
}

/* ------------------------------------------------------------------ */
/* Normal-basis extensions                                             */
/* ------------------------------------------------------------------ */

NormalBasisExtension cobar_normal_basis(const ComodAlgebra& e, const DegreeWindow& w) {
  const FieldSpec f = e.h.field();
  NormalBasisExtension nb{cobar_multiplication(e, CobarVariant::Left, w),
                          cobar_multiplication(e, CobarVariant::TwoSided, w),
                          {}};
  const DGBialgebra gnd = ground_field_bialgebra(f);
  BialgebraMap gamma{gnd, e.h, e.h.alg.eta};
  {
    const CheckReport r = verify_bialgebra_map(gamma);
    if (!r.passed())
      throw AxiomError("the coaugmentation is not a bialgebra map: " +
                       r.failures.front());
  }
  ComodAlgebra srcca = trivial_comod_algebra(gnd, nb.a.alg);

  std::map<int, Matrix> comps;
  const Matrix cg = e.h.alg.eta.component(0);
  for (const auto& [deg, list] : nb.a.omega.words) {
    if (list.empty()) continue;
    Matrix mat(nb.b.omega.complex->dim(deg), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const CobarWord& we = list[col];
      for (const auto& [rc, v] : cg.entries()) {
        CobarWord t = we;
        t.np = 0;
        t.ni = rc.first;
        const auto at = nb.b.omega.find(deg, t);
        if (!at) throw ShapeError("normal-basis inclusion left the basis");
        mat.add_to(*at, col, v);
      }
    }
    comps[deg] = std::move(mat);
  }
  ChainMap phi(nb.a.omega.complex, nb.b.omega.complex, std::move(comps));
  {
    const CheckReport r = verify_algebra_morphism(phi, nb.a.alg, nb.b.alg);
    if (!r.passed())
      throw AxiomError("the normal-basis inclusion is not an algebra map: " +
                       r.failures.front());
  }
  nb.morphism = ComodAlgMorphism{gamma, srcca, *nb.b.comod,
                                 AlgebraMap{nb.a.alg, nb.b.alg, phi}};
  {
    const CheckReport r = verify_comod_alg_morphism(nb.morphism);
    if (!r.passed())
      throw AxiomError("the normal-basis extension failed verification: " +
                       r.failures.front());
  }
  return nb;
}

HcoMapResult hco_map_normal_basis(const NormalBasisExtension& nb) {
  HcoMapResult out;
  out.src = nb.a;
  out.tgt = nb.a;
  out.map = ChainMap::identity(nb.a.omega.complex);
  out.supported_case = "normal basis";

  /* The collapse certificate: the inclusion identifies Omega(E;K;R) with
   * the coinvariants of the last-factor coaction on Omega(E;K;K). */
  const CComodule lf = comod_algebra_ccomodule(*nb.b.comod);
  const SubComplex coinv = ccomodule_coinvariants(lf, nb.b.omega.c);
  const ChainMap into = corestrict(coinv, nb.morphism.phi.map);
  out.report = verify_degreewise_iso(into);
  if (!out.report.passed())
    throw AxiomError("the normal-basis coinvariants collapse failed: " +
                     out.report.failures.front());
  return out;
}

/* ------------------------------------------------------------------ */
/* Bar construction                                                    */
/* ------------------------------------------------------------------ */

std::optional<std::size_t> BarCoalgebra::find(
    int degree, const std::vector<std::pair<int, std::size_t>>& w) const {
  const auto it = index_.find(degree);
  if (it == index_.end()) return std::nullopt;
  const auto jt = it->second.find(w);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

BarCoalgebra bar(const DGAlgebra& a, const DegreeWindow& w) {
  const FieldSpec f = a.field();
  if (!is_connected(a.complex, a.eta))
    throw NonConnectedError(
        "bar needs a connected algebra: the unit alone in degree 0 and nothing below");
  if (w.hi - 1 < w.lo) throw WindowTooSmall("bar window leaves no trusted degrees");
  const int atop = content_top(a.complex);
  if (a.square.product()->window().hi < std::min(2 * atop, w.hi - 2))
    throw WindowTooSmall(
        "the algebra square window cannot certify bar merges on this window");

  BarCoalgebra out;
  out.a = a;
  out.trusted = TrustedRange(w.lo, w.hi - 1);
  const int hi = w.hi;

  const auto by_deg = letter_words(a.complex, +1, 1, hi);
  std::map<int, std::vector<std::string>> basis;
  for (int deg = 0; deg <= hi; ++deg) {
    auto& list = out.words[deg];
    std::vector<std::string> labels;
    const auto it = by_deg.find(deg);
    if (it != by_deg.end())
      for (const auto& ws : it->second) {
        std::string label = "1";
        if (!ws.empty()) {
          std::vector<std::string> parts;
          parts.reserve(ws.size());
          for (const auto& l : ws)
            parts.push_back(wrap_letter("s", a.complex->labels(l.first)[l.second]));
          label = join_word(parts);
        }
        out.index_[deg][ws] = list.size();
        list.push_back(ws);
        labels.push_back(std::move(label));
      }
    if (!labels.empty()) basis[deg] = std::move(labels);
  }

  GradedVectorSpace space(f, DegreeWindow(std::min(w.lo, 0) - 1, hi), basis);
  std::map<int, Matrix> d;
  for (int deg = 1; deg <= hi; ++deg) {
    const auto& list = out.words[deg];
    if (list.empty()) continue;
    Matrix dn(space.dim(deg - 1), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const auto& ws = list[col];
      int pre = 0;  // total bar degree of the letters before slot j
      for (std::size_t j = 0; j < ws.size(); ++j) {
        const auto [dj, ij] = ws[j];
        /* Internal: −s d per slot; a merge into degree 0 is reduced away. */
        if (dj >= 2) {
          const Matrix dc = a.complex->d(dj).column(ij);
          if (!dc.is_zero()) {
            const Scalar s = sign_pow(f, pre + 1);
            for (const auto& [rc, v] : dc.entries()) {
              Letters t = ws;
              t[j] = {dj - 1, rc.first};
              const auto at = out.find(deg - 1, t);
              if (!at) throw ShapeError("bar differential left the basis");
              dn.add_to(*at, col, s * v);
            }
          }
        }
        /* Merge with the next letter, sign (−1)^{ε_j}. */
        if (j + 1 < ws.size()) {
          const auto [dk, ik] = ws[j + 1];
          const Matrix mu = mu_pair(a, dj, ij, dk, ik);
          if (!mu.is_zero()) {
            const Scalar s = sign_pow(f, pre + dj + 1);
            for (const auto& [rc, v] : mu.entries()) {
              Letters t;
              t.reserve(ws.size() - 1);
              t.insert(t.end(), ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(j));
              t.push_back({dj + dk, rc.first});
              t.insert(t.end(), ws.begin() + static_cast<std::ptrdiff_t>(j) + 2, ws.end());
              const auto at = out.find(deg - 1, t);
              if (!at) throw ShapeError("bar differential left the basis");
              dn.add_to(*at, col, s * v);
            }
          }
        }
        pre += dj + 1;
      }
    }
    d[deg] = std::move(dn);
  }

  ComplexPtr bc = ChainComplex::make(std::move(space), std::move(d));
  TensorLayout bsq = tensor(bc, bc, bc->window());
  std::map<int, Matrix> dcomp;
  for (const auto& [deg, list] : out.words) {
    if (list.empty()) continue;
    Matrix mat(bsq.product()->dim(deg), list.size(), f);
    for (std::size_t col = 0; col < list.size(); ++col) {
      const auto& ws = list[col];
      int pl = 0;
      for (std::size_t cut = 0; cut <= ws.size(); ++cut) {
        if (cut > 0) pl += ws[cut - 1].first + 1;
        const Letters left(ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(cut));
        const Letters right(ws.begin() + static_cast<std::ptrdiff_t>(cut), ws.end());
        const auto li = out.find(pl, left);
        const auto ri = out.find(deg - pl, right);
        if (!li || !ri) throw ShapeError("bar deconcatenation left the basis");
        const auto ti = bsq.find(deg, pl, *li, *ri);
        if (!ti) throw WindowTooSmall("the bar square window cannot hold the deconcatenation");
        mat.add_to(*ti, col, Scalar::one(f));
      }
    }
    dcomp[deg] = std::move(mat);
  }
  ChainMap delta(bc, bsq.product(), std::move(dcomp));

  const std::size_t empty_at = *out.find(0, Letters{});
  std::map<int, Matrix> ecomp;
  {
    Matrix er(1, bc->dim(0), f);
    er.set(0, empty_at, Scalar::one(f));
    ecomp[0] = std::move(er);
  }
  ChainMap eps(bc, unit_complex(f), std::move(ecomp));
  std::map<int, Matrix> ccomp;
  {
    Matrix cc(bc->dim(0), 1, f);
    cc.set(empty_at, 0, Scalar::one(f));
    ccomp[0] = std::move(cc);
  }
  ChainMap coaug(unit_complex(f), bc, std::move(ccomp));

  out.coalg = DGCoalgebra{bc, bsq, delta, eps, coaug};
  {
    const CheckReport r = verify_dg_structure(out.coalg);
    if (!r.passed())
      throw AxiomError("the bar coalgebra failed verification: " + r.failures.front());
  }
  return out;
}

/* ------------------------------------------------------------------ */
/* The counit H → B(Omega(H))                                          */
/* ------------------------------------------------------------------ */

CobarBarCounit cobar_bar_counit(const DGBialgebra& h, const DegreeWindow& w) {
  const FieldSpec f = h.field();
  if (content_top(h.complex()) > w.hi)
    throw WindowTooSmall("the window must cover the bialgebra content for the counit");
  CobarBarCounit out;
  out.omega = cobar_multiplication(
      trivial_comod_algebra(h, ground_field_bialgebra(f).alg), CobarVariant::Left, w);
  out.bar_of = bar(out.omega.alg, w);
  const CobarComplex& om = out.omega.omega;
  const ComplexPtr& bc = out.bar_of.complex();

  /* All reduced splittings of a basis element (last part expanded). */
  struct Split {
    Scalar c;
    std::vector<std::pair<int, std::size_t>> parts;
  };
  auto splittings = [&](int nh, std::size_t ih) {
    std::vector<Split> done{{Scalar::one(f), {{nh, ih}}}};
    std::vector<Split> frontier = done;
    while (!frontier.empty()) {
      std::vector<Split> next;
      for (const auto& s : frontier) {
        const auto [lp, li] = s.parts.back();
        const Matrix dl = h.coalg.delta.component(lp).column(li);
        for (const auto& [rc, v] : dl.entries()) {
          const auto fac = h.coalg.square.factors(lp)[rc.first];
          if (fac.p < 1 || lp - fac.p < 1) continue;
          Split t = s;
          t.c = s.c * v;
          t.parts.back() = {fac.p, fac.i};
          t.parts.push_back({lp - fac.p, fac.j});
          next.push_back(std::move(t));
        }
      }
      done.insert(done.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return done;
  };

  /* Candidate word-length signs; the chain condition picks the survivor. */
  const std::vector<std::pair<std::string, std::function<Scalar(int)>>> candidates = {
      {"+1", [f](int) { return Scalar::one(f); }},
      {"(-1)^(k-1)", [f](int k) { return sign_pow(f, k - 1); }},
      {"(-1)^(k(k-1)/2)",
       [f](int k) { return sign_pow(f, static_cast<long long>(k) * (k - 1) / 2); }},
  };

  const Matrix eps0 = h.coalg.eps.component(0);
  std::optional<ChainMap> chosen;
  for (const auto& [name, gamma] : candidates) {
    std::map<int, Matrix> comps;
    const int top = content_top(h.complex());
    for (int nh = 0; nh <= top; ++nh) {
      const std::size_t dh = h.complex()->dim(nh);
      if (!dh) continue;
      Matrix mat(bc->dim(nh), dh, f);
      for (std::size_t ih = 0; ih < dh; ++ih) {
        if (nh == 0) {
          mat.add_to(*out.bar_of.find(0, {}), ih, eps0.at(0, ih));
          continue;
        }
        for (const auto& s : splittings(nh, ih)) {
          Letters ws;
          ws.reserve(s.parts.size());
          for (const auto& [pp, pi] : s.parts) {
            const CobarWord tw{0, 0, {{pp, pi}}, 0, 0};
            const auto oi = om.find(pp - 1, tw);
            if (!oi) throw WindowTooSmall("counit letters leave the cobar window");
            ws.push_back({pp - 1, *oi});
          }
          const auto bi = out.bar_of.find(nh, ws);
          if (!bi) throw WindowTooSmall("counit words leave the bar window");
          mat.add_to(*bi, ih, s.c * gamma(static_cast<int>(s.parts.size())));
        }
      }
      comps[nh] = std::move(mat);
    }
    try {
      ChainMap cm(h.complex(), bc, std::move(comps));
      chosen = cm;
      out.sign_rule = name;
      break;
    } catch (const AxiomError&) {
      continue;
    }
  }
  if (!chosen)
    throw AxiomError("no word-length sign pattern makes the bar counit a chain map");
  out.counit = *chosen;
  out.report = verify_coalgebra_morphism(out.counit, h.coalg, out.bar_of.coalg);
  if (!out.report.passed())
    throw AxiomError("the bar counit is not a coalgebra map: " +
                     out.report.failures.front());
  return out;
}

/* ------------------------------------------------------------------ */
/* Filtrations and freeness                                            */
/* ------------------------------------------------------------------ */

namespace {

std::size_t stage_rank(const ConilpotentWitness& wtn, std::size_t t, int deg) {
  if (t >= wtn.stages.size()) return 0;
  const auto it = wtn.stages[t].find(deg);
  if (it == wtn.stages[t].end()) return 0;
  return it->second.rank();
}

/* Distinct generator shapes (letters, right slot) of a given total degree. */
std::vector<CobarWord> generator_shapes(const CobarComplex& om, int u) {
  std::vector<CobarWord> out;
  std::set<std::tuple<Letters, int, std::size_t>> seen;
  const auto it = om.words.find(u);
  if (it == om.words.end()) return out;
  for (const CobarWord& e : it->second) {
    if (e.mp != 0) continue;
    const auto key = std::make_tuple(e.letters, e.np, e.ni);
    if (!seen.insert(key).second) continue;
    CobarWord g;
    g.letters = e.letters;
    g.np = e.np;
    g.ni = e.ni;
    out.push_back(std::move(g));
  }
  return out;
}

/* The generator element 1_A ⊗ w ⊗ h of a shape, as a coordinate column. */
Matrix generator_column(const CobarAlgebra& ts, const CobarWord& shape, int u) {
  const FieldSpec f = ts.omega.c.field();
  const Matrix ea = ts.coeff.eta.component(0);
  Matrix gcol(ts.omega.complex->dim(u), 1, f);
  for (const auto& [rc, v] : ea.entries()) {
    CobarWord t = shape;
    t.mi = rc.first;
    const auto at = ts.omega.find(u, t);
    if (!at) throw ShapeError("generator left the basis");
    gcol.add_to(*at, 0, v);
  }
  return gcol;
}

/* rho_tilde(a) · g for a basis element a of degree pa and a column g of
 * degree u, through the cobar algebra's own multiplication tables. */
Matrix action_column(const CobarAlgebra& ts, int pa, std::size_t ia, int u,
                     const Matrix& gcol) {
  const FieldSpec f = ts.omega.c.field();
  const int deg = pa + u;
  Matrix col(ts.omega.complex->dim(deg), 1, f);
  const Matrix rt = ts.rho_tilde->component(pa).column(ia);
  for (const auto& [rrc, rv] : rt.entries())
    for (const auto& [grc, gv] : gcol.entries()) {
      const auto qi = ts.alg.square.find(deg, pa, rrc.first, grc.first);
      if (!qi) continue;
      const Matrix pc = ts.alg.mu.component(deg).column(*qi);
      for (const auto& [prc, pv] : pc.entries())
        col.add_to(prc.first, 0, rv * gv * pv);
    }
  return col;
}

}  // namespace

CobarFiltration conilpotent_cobar_filtration(const CobarAlgebra& ts,
                                             const ConilpotentWitness& wtn) {
  if (ts.variant != CobarVariant::TwoSided)
    throw ShapeError("the conilpotent filtration needs the two-sided model");
  const CobarComplex& om = ts.omega;
  const DGCoalgebra& c = om.c;
  const FieldSpec f = c.field();
  CobarFiltration out;
  out.report.absorb(verify_split_conilpotent(c, wtn), "conilpotent witness: ");
  if (!out.report.passed()) return out;

  const DegreeWindow w(om.trusted.lo, om.trusted.hi + 1);
  const CobarComplex zs =
      cobar(om.m, c, trivial_ccomodule(c, unit_complex(f), Side::Left), w);

  for (const auto& stage : wtn.stages) {
    std::map<int, Matrix> span;
    for (const auto& [deg, list] : om.words) {
      if (list.empty()) continue;
      std::vector<Matrix> cols;
      for (const CobarWord& e : list) {
        if (e.ni != 0) continue;  // one representative per shape
        const auto st = stage.find(e.np);
        if (st == stage.end()) continue;
        for (std::size_t cidx = 0; cidx < st->second.cols(); ++cidx) {
          Matrix col(list.size(), 1, f);
          const Matrix scol = st->second.column(cidx);
          for (const auto& [rc, v] : scol.entries()) {
            CobarWord t = e;
            t.ni = rc.first;
            const auto at = om.find(deg, t);
            if (!at) throw ShapeError("filtration stage left the basis");
            col.add_to(*at, 0, v);
          }
          cols.push_back(std::move(col));
        }
      }
      if (!cols.empty()) {
        Matrix mat(list.size(), cols.size(), f);
        for (std::size_t j = 0; j < cols.size(); ++j) mat.set_column(j, cols[j]);
        span[deg] = std::move(mat);
      }
    }
    out.stages.push_back(subcomplex_from_span(om.complex, span));
  }

  for (int deg = 0; deg <= w.hi; ++deg)
    if (out.stages.front().sub->dim(deg) != zs.complex->dim(deg))
      out.report.fail("stage 0 is not Omega(A;H;R)-shaped in degree " +
                      std::to_string(deg));

  for (std::size_t t = 1; t < out.stages.size(); ++t) {
    const ChainMap inc = restrict_between(out.stages[t - 1], out.stages[t],
                                          ChainMap::identity(om.complex));
    std::map<int, Matrix> rel;
    for (int deg = om.complex->window().lo; deg <= om.complex->window().hi; ++deg) {
      const Matrix mc = inc.component(deg);
      if (!mc.is_zero()) rel[deg] = mc;
    }
    const QuotientComplex qt = quotient_by_span(out.stages[t].sub, rel);
    out.report.absorb(verify_split_ses(inc, qt.projection, qt.section),
                      "stage " + std::to_string(t) + ": ");
    for (int deg = 0; deg <= w.hi; ++deg) {
      std::size_t expect = 0;
      for (int p = 0; p <= deg; ++p) {
        const std::size_t zp = zs.complex->dim(p);
        if (!zp) continue;
        expect += zp * (stage_rank(wtn, t, deg - p) - stage_rank(wtn, t - 1, deg - p));
      }
      if (qt.quotient->dim(deg) != expect)
        out.report.fail("stage " + std::to_string(t) +
                        " quotient dimension mismatch in degree " +
                        std::to_string(deg));
    }
  }
  return out;
}

CheckReport cobar_afree_check(const CobarAlgebra& ts) {
  CheckReport r;
  if (ts.variant != CobarVariant::TwoSided || !ts.rho_tilde) {
    r.fail("the freeness certificate needs the two-sided model");
    return r;
  }
  const CobarComplex& om = ts.omega;
  const FieldSpec f = om.c.field();
  for (int deg = 0; deg <= om.trusted.hi + 1; ++deg) {
    const std::size_t dim = om.complex->dim(deg);
    std::vector<Matrix> cols;
    for (int pa = 0; pa <= deg; ++pa) {
      const std::size_t da = om.m.carrier->dim(pa);
      if (!da) continue;
      for (const CobarWord& g : generator_shapes(om, deg - pa)) {
        const Matrix gcol = generator_column(ts, g, deg - pa);
        for (std::size_t ia = 0; ia < da; ++ia)
          cols.push_back(action_column(ts, pa, ia, deg - pa, gcol));
      }
    }
    if (cols.size() != dim) {
      r.fail("generator count mismatch in degree " + std::to_string(deg));
      continue;
    }
    if (dim == 0) continue;
    Matrix mat(dim, cols.size(), f);
    for (std::size_t j = 0; j < cols.size(); ++j) mat.set_column(j, cols[j]);
    if (mat.rank() != dim)
      r.fail("the action map is not bijective in degree " + std::to_string(deg));
  }
  return r;
}

AModule cobar_left_module(const CobarAlgebra& ts) {
  if (ts.variant != CobarVariant::TwoSided || !ts.rho_tilde)
    throw ShapeError("the module structure needs the two-sided model");
  TensorLayout lay = module_layout(ts.coeff, ts.omega.complex, Side::Left,
                                   ts.omega.complex->window());
  const ChainMap rt_id = tensor_map(*ts.rho_tilde, ChainMap::identity(ts.omega.complex),
                                    lay, ts.alg.square);
  const ChainMap action = ts.alg.mu.compose(rt_id);
  AModule out{ts.coeff, ts.omega.complex, Side::Left, lay, action};
  const CheckReport r = verify_amodule(out);
  if (!r.passed())
    throw AxiomError("the cobar left module failed verification: " + r.failures.front());
  return out;
}

FiltrationWitness cobar_cell_filtration(const CobarAlgebra& ts) {
  if (ts.variant != CobarVariant::TwoSided || !ts.rho_tilde)
    throw ShapeError("the cell filtration needs the two-sided model");
  const CobarComplex& om = ts.omega;
  const FieldSpec f = om.c.field();
  const int hi = om.trusted.hi + 1;
  FiltrationWitness out;

  std::map<int, std::vector<CobarWord>> shapes;
  std::map<int, std::vector<Matrix>> gcols;
  for (int u = 0; u <= hi; ++u) {
    shapes[u] = generator_shapes(om, u);
    for (const auto& g : shapes[u])
      gcols[u].push_back(generator_column(ts, g, u));
  }

  for (int t = 0; t <= hi; ++t) {
    FiltrationStage st;
    /* Stage t is the A-span of the generators of total degree <= t: its
     * columns are the action products, so the span is an A-submodule by
     * construction and d-closed because d keeps generators in lower
     * stages. */
    for (int deg = 0; deg <= hi; ++deg) {
      std::vector<Matrix> cols;
      for (int u = 0; u <= std::min(t, deg); ++u) {
        const std::size_t da = om.m.carrier->dim(deg - u);
        if (!da) continue;
        for (const Matrix& gcol : gcols[u])
          for (std::size_t ia = 0; ia < da; ++ia)
            cols.push_back(action_column(ts, deg - u, ia, u, gcol));
      }
      if (cols.empty()) continue;
      Matrix mat(om.complex->dim(deg), cols.size(), f);
      for (std::size_t j = 0; j < cols.size(); ++j) mat.set_column(j, cols[j]);
      st.span[deg] = std::move(mat);
    }

    std::map<int, std::vector<std::string>> cbasis;
    if (!shapes[t].empty()) {
      std::vector<std::string> labels;
      for (const auto& g : shapes[t]) {
        const auto at = om.find(t, g);
        if (!at) throw ShapeError("cell representative left the basis");
        labels.push_back(om.complex->labels(t)[*at]);
      }
      cbasis[t] = std::move(labels);
    }
    st.cells = GradedVectorSpace(f, DegreeWindow(t, t), cbasis);

    if (!shapes[t].empty()) {
      Matrix gens(om.complex->dim(t), shapes[t].size(), f);
      for (std::size_t j = 0; j < shapes[t].size(); ++j)
        gens.set_column(j, gcols[t][j]);
      st.gens[t] = std::move(gens);
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

}  // namespace hhg
