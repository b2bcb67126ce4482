#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhg/galois.hpp"

namespace hhg {

/* ------------------------------------------------------------------ */
/* One-sided comodules over a coalgebra                                */
/* ------------------------------------------------------------------ */

/* A right or left comodule over a dg coalgebra C (base = ground field).
 * Right: coaction M -> M (x) C into `layout`; left: N -> C (x) N.  This is
 * the light-weight input type of the cobar constructions; the coring-based
 * Comodule type stays reserved for descent data over nontrivial bases. */
struct CComodule {
  ComplexPtr carrier;
  Side side = Side::Right;
  TensorLayout layout;
  ChainMap coaction;
};

/* Counit law and coassociativity, checked pointwise on every basis
 * element of the carrier.  The chain condition already held when the
 * coaction was constructed. */
CheckReport verify_ccomodule(const CComodule& m, const DGCoalgebra& c);

/* Trivial coaction x |-> x (x) 1 (resp. 1 (x) x) through the coaugmentation. */
CComodule trivial_ccomodule(const DGCoalgebra& c, const ComplexPtr& m, Side side);

/* C as a comodule over itself via its comultiplication. */
CComodule self_ccomodule(const DGCoalgebra& c, Side side);

/* The underlying right comodule of a comodule algebra. */
CComodule comod_algebra_ccomodule(const ComodAlgebra& ca);

/* Mirror a comodule through the symmetry isomorphism.  The flip of a right
 * coaction is a genuine left coaction only when C is cocommutative enough;
 * the result is re-verified and an AxiomError names the failing law
 * otherwise. */
CComodule flip_ccomodule(const DGCoalgebra& c, const CComodule& m);

/* ------------------------------------------------------------------ */
/* The two-sided cobar complex                                          */
/* ------------------------------------------------------------------ */

/* One basis element x (x) s^-1 c_1 | ... | s^-1 c_k (x) y of the cobar
 * complex: positions into the bases of M, of C (letters, degrees >= 2) and
 * of N. */
struct CobarWord {
  int mp = 0;
  std::size_t mi = 0;
  std::vector<std::pair<int, std::size_t>> letters;
  int np = 0;
  std::size_t ni = 0;

  friend bool operator<(const CobarWord& a, const CobarWord& b) {
    return std::tie(a.mp, a.mi, a.letters, a.np, a.ni) <
           std::tie(b.mp, b.mi, b.letters, b.np, b.ni);
  }
  friend bool operator==(const CobarWord& a, const CobarWord& b) {
    return std::tie(a.mp, a.mi, a.letters, a.np, a.ni) ==
           std::tie(b.mp, b.mi, b.letters, b.np, b.ni);
  }
};

/* Omega(M;C;N) = M (x) T(s^-1 Cbar) (x) N on a finite degree window, with
 * the six-term cobar differential (internal differentials, letterwise
 * reduced comultiplication, and the two coaction insertions).  Content
 * lives in degrees [0, hi]; the homology of the top degree would need the
 * clipped degree hi+1, so the trusted range stops at hi-1. */
struct CobarComplex {
  CComodule m, n;
  DGCoalgebra c;
  ComplexPtr complex;
  TrustedRange trusted{0, 0};
  std::map<int, std::vector<CobarWord>> words;

  const CobarWord& word(int degree, std::size_t i) const;
  std::optional<std::size_t> find(int degree, const CobarWord& w) const;

private:
  friend CobarComplex cobar(const CComodule&, const DGCoalgebra&,
                            const CComodule&, const DegreeWindow&);
  std::map<int, std::map<CobarWord, std::size_t>> index_;
};

/* Construct Omega(M;C;N).  Gates: C must be coaugmented with Cbar
 * concentrated in degrees >= 2 (NonSimplyConnected otherwise, so each
 * degree stays finite); the window must leave a nonempty trusted range
 * (WindowTooSmall); m and n must pass verify_ccomodule (AxiomError). */
CobarComplex cobar(const CComodule& m, const DGCoalgebra& c,
                   const CComodule& n, const DegreeWindow& w);

/* The right C-comodule structure of Omega(M;C;C) read off the last tensor
 * factor.  Requires n to be the self-comodule. */
CComodule cobar_last_factor_comodule(const CobarComplex& om);

/* Coinvariants of a right comodule over a coalgebra: the equalizer of the
 * coaction and of x |-> x (x) 1. */
SubComplex ccomodule_coinvariants(const CComodule& m, const DGCoalgebra& c);

/* ------------------------------------------------------------------ */
/* The cofree resolution Omega(M;C;C)                                  */
/* ------------------------------------------------------------------ */

struct CobarResolution {
  CobarComplex omega;       // Omega(M;C;C)
  ChainMap rho_tilde;       // M -> Omega, x |-> x_i (x) 1 (x) c^i
  ChainMap q;               // Omega -> M (x) C, kills word length >= 1
  ChainMap pi;              // (M (x) eps) o q : Omega -> M
  ChainHomotopy contraction;  // d h + h d = id - rho_tilde o pi, exactly
  CobarComplex zero_side;   // Omega(M;C;R)
  SubComplex coinv;         // coinvariants of the last-factor coaction
  ChainMap coinv_iso;       // Omega(M;C;R) -> coinv.sub, degreewise iso
};

/* Build the resolution and every certificate around it.  pi o rho_tilde
 * = id and the contraction identity hold exactly; the coinvariants of the
 * output are identified with Omega(M;C;R) by an explicit degreewise
 * isomorphism (AxiomError if any identity fails). */
CobarResolution cobar_resolution(const CComodule& m, const DGCoalgebra& c,
                                 const DegreeWindow& w);

/* ------------------------------------------------------------------ */
/* Cobar multiplication                                                 */
/* ------------------------------------------------------------------ */

enum class CobarVariant { Left, Right, TwoSided };
// Left     Omega(A;H;R)  for a right H-comodule algebra A
// Right    Omega(R;H;A)  with the flipped (left) coaction on A
// TwoSided Omega(A;H;H)

struct CobarAlgebra {
  CobarComplex omega;
  CobarVariant variant = CobarVariant::Left;
  DGAlgebra alg;
  DGAlgebra coeff;  // the input algebra A (acts on Omega through rho_tilde)
  std::optional<ComodAlgebra> comod;  // TwoSided: right H-coaction, last slot
  std::optional<ChainMap> rho_tilde;  // TwoSided: A -> Omega, algebra map
  std::optional<ChainMap> q;          // TwoSided: Omega -> A (x) H, algebra map
  std::optional<ChainMap> pi;         // TwoSided: Omega -> A
  std::vector<std::string> sign_reports;  // straightening rules actually used
};

/* Equip the cobar complex of the named shape with its multiplication.
 * Products of basis elements are computed by straightening generator
 * strings: A-parts cross letters through the coaction, the right slot
 * crosses letters through its left coaction, and all signs follow the
 * Koszul rule.  Associativity, unitality and the derivation property are
 * re-verified exactly on the truncated basis; for TwoSided, rho_tilde and
 * q are verified algebra morphisms and the last-factor coaction a
 * comodule-algebra structure.  Any failure throws AxiomError. */
CobarAlgebra cobar_multiplication(const ComodAlgebra& ca, CobarVariant variant,
                                  const DegreeWindow& w);

/* ------------------------------------------------------------------ */
/* Homotopy coinvariants                                                */
/* ------------------------------------------------------------------ */

/* The homotopy coinvariants model A^{hco H} = Omega(A;H;R) with its
 * multiplication; hco() strips the bookkeeping down to the DGAlgebra.
 * When Hbar = 0 the model degenerates to A itself (word-free basis). */
CobarAlgebra hco_model(const ComodAlgebra& ca, const DegreeWindow& w);
DGAlgebra hco(const ComodAlgebra& ca, const DegreeWindow& w);

struct HcoMapResult {
  CobarAlgebra src, tgt;
  ChainMap map;                // src.alg.complex -> tgt.alg.complex
  CheckReport report;          // algebra-morphism checks on the comparison
  std::string supported_case;  // which rule produced the map
};

/* The comparison A^{hco H} -> B^{hco K} induced by a morphism of comodule
 * algebras.  Supported without help: Gamma = id_H (gives Omega(phi;H;R))
 * and Gamma = eta : R -> K (gives a |-> phi(a) (x) 1).  Any other Gamma
 * needs a user-supplied comparison map between the two models, which is
 * verified to be an algebra chain map before being accepted
 * (UnsupportedGamma otherwise). */
HcoMapResult hco_map(const ComodAlgMorphism& m, const DegreeWindow& w,
                     const std::optional<ChainMap>& witness = std::nullopt);

/* ------------------------------------------------------------------ */
/* Normal-basis extensions                                              */
/* ------------------------------------------------------------------ */

/* The extension (eta, Omega(E;K;eta)) : Omega(E;K;R) -> Omega(E;K;K)
 * attached to a K-comodule algebra E.  The source carries the trivial
 * coaction over the ground field, the target the last-factor coaction. */
struct NormalBasisExtension {
  CobarAlgebra a;            // Omega(E;K;R) over the ground bialgebra
  CobarAlgebra b;            // Omega(E;K;K) over K
  ComodAlgMorphism morphism; // (eta, word-length inclusion)
};

NormalBasisExtension cobar_normal_basis(const ComodAlgebra& e,
                                        const DegreeWindow& w);

/* For the normal-basis shape the coinvariants comparison collapses: phi
 * maps Omega(E;K;R) isomorphically onto the K-coinvariants of
 * Omega(E;K;K), so both models are Omega(E;K;R) itself and the comparison
 * is the identity.  The report carries the verified collapse. */
HcoMapResult hco_map_normal_basis(const NormalBasisExtension& nb);

/* ------------------------------------------------------------------ */
/* Bar construction                                                     */
/* ------------------------------------------------------------------ */

struct BarCoalgebra {
  DGAlgebra a;
  DGCoalgebra coalg;          // T(s Abar), deconcatenation, projection counit
  TrustedRange trusted{0, 0};
  std::map<int, std::vector<std::vector<std::pair<int, std::size_t>>>> words;

  ComplexPtr complex() const { return coalg.complex; }
  std::optional<std::size_t> find(
      int degree, const std::vector<std::pair<int, std::size_t>>& w) const;

private:
  friend BarCoalgebra bar(const DGAlgebra&, const DegreeWindow&);
  std::map<int, std::map<std::vector<std::pair<int, std::size_t>>, std::size_t>>
      index_;
};

/* The reduced bar construction B(A) = T(s Abar) with the standard
 * differential (letterwise internal part plus adjacent merges) and the
 * deconcatenation comultiplication.  Gate: Abar concentrated in degrees
 * >= 1, i.e. A connected (NonConnectedError); merges must stay inside the
 * algebra's own exact layout (WindowTooSmall otherwise). */
BarCoalgebra bar(const DGAlgebra& a, const DegreeWindow& w);

struct CobarBarCounit {
  CobarAlgebra omega;   // Omega(H) = Omega(R;H;R) with concatenation
  BarCoalgebra bar_of;  // B(Omega(H))
  ChainMap counit;      // H -> B(Omega(H))
  CheckReport report;   // coalgebra-morphism certificate
  std::string sign_rule;  // word-length sign pattern that passed calibration
};

/* The adjunction counit H -> B(Omega(H)): a class of degree n is sent to
 * the sum over k of the words [s t(c_(1)) | ... | s t(c_(k))] built from
 * the (k-1)-fold reduced comultiplication and the one-letter inclusion
 * t(c) = s^-1 cbar.  The global sign of each word length is calibrated
 * against the chain condition and recorded. */
CobarBarCounit cobar_bar_counit(const DGBialgebra& h, const DegreeWindow& w);

/* ------------------------------------------------------------------ */
/* Filtrations and freeness certificates                                */
/* ------------------------------------------------------------------ */

struct CobarFiltration {
  std::vector<SubComplex> stages;  // Omega(A;H;H[t]) inside Omega(A;H;H)
  CheckReport report;
};

/* The filtration of Omega(A;H;H) induced by a split-conilpotent witness
 * on H: stage t restricts the last tensor factor to H[t].  Every stage is
 * closed under the differential; each successive quotient passes
 * verify_split_ses and is dimension-equal to Omega(A;H;R) (x) coker j_t. */
CobarFiltration conilpotent_cobar_filtration(const CobarAlgebra& two_sided,
                                             const ConilpotentWitness& wtn);

/* Rank certificate: the action map A (x) (T(s^-1 Hbar) (x) H) -> Omega
 * through rho_tilde is degreewise bijective, i.e. the underlying graded
 * A-module of Omega(A;H;H) is free on the word generators. */
CheckReport cobar_afree_check(const CobarAlgebra& two_sided);

/* Omega(A;H;H) as a left A-module along rho_tilde, plus the canonical
 * cellular filtration by total generator degree: F_t is the A-span of the
 * generators 1 (x) w (x) h with |w| + |h| <= t.  The differential sends
 * generators into F_{t-1}, so the stages form a certified cell structure
 * for verify_cellular_filtration. */
AModule cobar_left_module(const CobarAlgebra& two_sided);
FiltrationWitness cobar_cell_filtration(const CobarAlgebra& two_sided);

}  // namespace hhg
