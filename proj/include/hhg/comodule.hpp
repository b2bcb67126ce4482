#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hhg/dg.hpp"
#include "hhg/subquotient.hpp"

namespace hhg {

enum class Side { Left, Right };

/* Top degree carrying any basis element (window().lo - 1 when empty). */
int content_top(const ComplexPtr& x);
/* Working window able to hold both complexes: the hull of their windows. */
DegreeWindow hull_window(const ComplexPtr& a, const ComplexPtr& b);

/* A module over a DG algebra.  The layout is M⊗A (right) or A⊗M (left),
 * clipped to a working window; pairs clipped away act by zero, which is
 * exact whenever the window dominates the content (finite objects) and the
 * declared truncation otherwise. */
struct AModule {
  DGAlgebra algebra;
  ComplexPtr complex;
  Side side;
  TensorLayout layout;
  ChainMap action;  // layout.product() → complex
};

TensorLayout module_layout(const DGAlgebra& a, const ComplexPtr& m, Side side,
                           std::optional<DegreeWindow> clip = {});
CheckReport verify_amodule(const AModule& m);
AModule free_module(const DGAlgebra& a, Side side);
/* m·a = aug(a)·m (requires a.aug). */
AModule trivial_module(const DGAlgebra& a, const ComplexPtr& m, Side side);

/* Per-degree span of { (m·a)⊗n − m⊗(a·n) } inside the layout mn. */
std::map<int, Matrix> module_relations(const AModule& m, const AModule& n,
                                       const TensorLayout& mn);

/* M ⊗_A N as an explicit quotient of the plain tensor product; quotient
 * labels are representative pair labels. */
struct TensorOverResult {
  TensorLayout layout;
  QuotientComplex pres;

  const ComplexPtr& complex() const { return pres.quotient; }
};
TensorOverResult tensor_over(const AModule& m, const AModule& n);  // m right, n left

/* The mutually inverse chain maps M⊗_A A ≅ M (and A⊗_A M ≅ M by side). */
ChainMap tensor_unit_collapse(const AModule& m, const TensorOverResult& t);
ChainMap tensor_unit_insert(const AModule& m, const TensorOverResult& t);

/* m ↦ m⊗1 / m ↦ 1⊗m into a plain layout whose other factor has the unit. */
ChainMap insert_unit_right(const TensorLayout& t, const ChainMap& eta);
ChainMap insert_unit_left(const TensorLayout& t, const ChainMap& eta);

struct Bimodule {
  DGAlgebra algebra;
  ComplexPtr complex;
  TensorLayout left_layout;   // A⊗C
  TensorLayout right_layout;  // C⊗A
  ChainMap left_action;
  ChainMap right_action;

  AModule right_module() const {
    return AModule{algebra, complex, Side::Right, right_layout, right_action};
  }
  AModule left_module() const {
    return AModule{algebra, complex, Side::Left, left_layout, left_action};
  }
};
CheckReport verify_bimodule(const Bimodule& b);
Bimodule free_bimodule(const DGAlgebra& a);

/* An algebra morphism bundled with its endpoints. */
struct AlgebraMap {
  DGAlgebra src;
  DGAlgebra tgt;
  ChainMap map;
};
CheckReport verify_algebra_map(const AlgebraMap& f);
AlgebraMap identity_algebra_map(const DGAlgebra& a);

/* Change of scalars along φ: A→B. */
AModule restrict_scalars(const AlgebraMap& phi, const AModule& n);
Bimodule restrict_bimodule(const AlgebraMap& phi, const Bimodule& n);
struct ExtendedModule {
  TensorOverResult pres;  // M⊗_A B
  AModule module;         // as right B-module
};
ExtendedModule extend_scalars(const AlgebraMap& phi, const AModule& m);
/* Adjunction structure maps: unit M → φ*φ_*(M), counit φ_*φ*(N) → N. */
ChainMap extension_unit(const AlgebraMap& phi, const AModule& m, const ExtendedModule& e);
ChainMap extension_counit(const AlgebraMap& phi, const AModule& n, const ExtendedModule& en);
/* The B-linear extension [m⊗b] ↦ [f(m)⊗b] of an A-linear chain map f. */
ChainMap extend_scalars_map(const ExtendedModule& src, const ExtendedModule& tgt,
                            const ChainMap& f);

/* A coring over A: comonoid in A-bimodules.  delta lands in the explicit
 * C⊗_A C presentation; verification lifts through its section (the answers
 * are independent of the chosen representatives). */
struct Coring {
  DGAlgebra base;
  Bimodule c;
  TensorOverResult csq;  // C ⊗_A C
  ChainMap delta;        // C → csq.complex()
  ChainMap eps;          // C → base complex
};
CheckReport verify_coring(const Coring& k);
std::shared_ptr<const Coring> trivial_coring(const DGAlgebra& a);
/* A coalgebra viewed as a coring over the ground field (scalar actions). */
std::shared_ptr<const Coring> coring_from_coalgebra(const DGAlgebra& ground,
                                                    const DGCoalgebra& c);

/* A comodule over (A,C); mc presents M⊗_A C (right) or C⊗_A M (left). */
struct Comodule {
  std::shared_ptr<const Coring> coring;
  AModule m;
  TensorOverResult mc;
  ChainMap delta;  // m.complex → mc.complex()

  Side side() const { return m.side; }
  const ComplexPtr& complex() const { return m.complex; }
};
TensorOverResult comodule_carrier(const std::shared_ptr<const Coring>& k, const AModule& m);
Comodule make_comodule(std::shared_ptr<const Coring> k, AModule m, TensorOverResult carrier,
                       ChainMap delta);
CheckReport verify_comodule(const Comodule& m);
Comodule cofree_comodule(const std::shared_ptr<const Coring>& k, const AModule& n);
Comodule coring_as_comodule(const std::shared_ptr<const Coring>& k, Side side);
/* Over the trivial coring, comodules and modules coincide. */
Comodule module_as_comodule(const std::shared_ptr<const Coring>& trivial, const AModule& m);
AModule comodule_as_module(const Comodule& m);

/* M □_C N inside M⊗_A N (m right, n left, same coring). */
SubComplex cotensor_over(const Comodule& m, const Comodule& n);
/* The isomorphism M □_C C ≅ M and its inverse. */
ChainMap cotensor_counit_collapse(const Comodule& m, const Comodule& c_as_comod,
                                  const SubComplex& s);
ChainMap cotensor_counit_insert(const Comodule& m, const Comodule& c_as_comod,
                                const SubComplex& s);

/* Kernel of δ − (−⊗1); the coring base must be the ground field. */
SubComplex coinvariants(const Comodule& m);

/* φ_*(C) = B ⊗_A C ⊗_A B with the pushed coring structure, kept with its
 * presentation so comodules over it can be assembled on representatives. */
struct PushforwardCoring {
  std::shared_ptr<const Coring> coring;  // over phi.tgt
  std::shared_ptr<const Coring> source;  // the original (A,C)
  AlgebraMap phi;
  TensorLayout bc;       // B⊗C
  TensorLayout triple;   // (B⊗C)⊗B
  QuotientComplex pres;  // triple.product() ↠ coring complex
};
PushforwardCoring coring_pushforward(const AlgebraMap& phi,
                                     const std::shared_ptr<const Coring>& c);

/* A morphism of corings over a fixed base. */
struct CoringMap {
  std::shared_ptr<const Coring> src, tgt;
  ChainMap map;  // C → D
};
CheckReport verify_coring_map(const CoringMap& f);
enum class CoringDirection { Push, Pull };
/* Push: coaction composed with 1⊗_A f.  Pull: M □_D C with the Δ-induced
 * C-coaction (flatness is automatic over a field). */
Comodule change_of_corings(const CoringMap& f, const Comodule& m, CoringDirection dir);
/* Counit of the Push⊣Pull adjunction at m: (f_* f^*)(m) → m. */
ChainMap pull_push_counit(const CoringMap& f, const Comodule& m, const Comodule& pulled);

enum class CanonicalDirection { Can, Prim };
/* Can_φ(M) = M⊗_A B with the φ_*(C)-coaction; Prim_φ(N) = N □_{φ_*(C)} (B⊗_A C)
 * with its (A,C)-structure. */
Comodule canonical_can(const PushforwardCoring& d, const Comodule& m);
Comodule canonical_prim(const PushforwardCoring& d, const Comodule& n);
/* Unit of the Can⊣Prim adjunction at m: M → Prim(Can(M)). */
ChainMap canonical_unit(const PushforwardCoring& d, const Comodule& m, const Comodule& prim_can);

/* One stage of a cellular filtration: a span of F_t inside the module, the
 * cells X(t) (zero differential), and a representative generator in the
 * module for each cell. */
struct FiltrationStage {
  std::map<int, Matrix> span;
  GradedVectorSpace cells;
  std::map<int, Matrix> gens;  // per degree: module-dim × cell-dim
};
struct FiltrationWitness {
  std::vector<FiltrationStage> stages;
};
/* Passes iff every span is a DG A-submodule containing the previous one,
 * generators attach to the previous stage (d gens ⊆ F_{t−1}), and each
 * quotient is free on the declared cells: X(t)⊗A → F_t/F_{t−1} bijective
 * degreewise.  Degreewise splitting is automatic over a field. */
CheckReport verify_cellular_filtration(const AModule& n, const FiltrationWitness& wtn);

}  // namespace hhg
