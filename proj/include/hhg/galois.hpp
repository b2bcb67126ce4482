#pragma once

#include <memory>
#include <string>

#include "hhg/comodule.hpp"
#include "hhg/dg.hpp"

namespace hhg {

/* A morphism of bialgebras: one chain map respecting both structures. */
struct BialgebraMap {
  DGBialgebra src, tgt;
  ChainMap map;

  AlgebraMap as_algebra_map() const { return AlgebraMap{src.alg, tgt.alg, map}; }
};
CheckReport verify_bialgebra_map(const BialgebraMap& g);
BialgebraMap identity_bialgebra_map(const DGBialgebra& h);

/* An H-comodule algebra (A, ρ: A → A⊗H); ah is A⊗H on the hull window. */
struct ComodAlgebra {
  DGBialgebra h;
  DGAlgebra a;
  TensorLayout ah;
  ChainMap rho;  // a.complex → ah.product()
};
CheckReport verify_comod_algebra(const ComodAlgebra& ca);
/* ρ = (−)⊗1, the trivial coaction. */
ComodAlgebra trivial_comod_algebra(const DGBialgebra& h, const DGAlgebra& a);
/* H over itself with ρ = Δ. */
ComodAlgebra bialgebra_as_comod_algebra(const DGBialgebra& h);

/* An H-module coalgebra (C, κ: C⊗H → C); ch is C⊗H on the hull window. */
struct ModuleCoalgebra {
  DGBialgebra h;
  DGCoalgebra c;
  TensorLayout ch;
  ChainMap kappa;  // ch.product() → c.complex
};
CheckReport verify_module_coalgebra(const ModuleCoalgebra& mc);
/* κ = C⊗ε, the trivial action. */
ModuleCoalgebra trivial_module_coalgebra(const DGBialgebra& h, const DGCoalgebra& c);
/* H over itself with κ = μ. */
ModuleCoalgebra bialgebra_as_module_coalgebra(const DGBialgebra& h);

/* Desc(φ) = (B, B⊗_A B, Δ_φ, μ̄): the canonical descent coring, realized as
 * the pushforward of the trivial A-coring along φ so that the Can/Prim
 * machinery applies to it directly. */
PushforwardCoring desc(const AlgebraMap& phi);
/* The two natural coaugmentations B → B⊗_A B (Right: b ↦ b⊗1, Left: b ↦ 1⊗b). */
ChainMap desc_coaugmentation(const PushforwardCoring& d, Side side);
/* ε∘ι = id and Δ∘ι = ι paired with the unit class on the matching side. */
CheckReport verify_desc_coaugmentation(const PushforwardCoring& d, Side side);

/* Hopf(ρ, κ) = (A, A⊗C): left action μ⊗C, right action twisted through ρ
 * and κ, Δ = A⊗Δ_C into the A-relative square, ε = A⊗ε_C. */
struct HopfCoring {
  std::shared_ptr<const Coring> coring;
  ComodAlgebra ca;
  ModuleCoalgebra mc;
  TensorLayout ac;  // A⊗C, the coring's underlying complex
  std::string sign_convention;
};
HopfCoring hopf(const ComodAlgebra& ca, const ModuleCoalgebra& mc);
/* Shorthand Hopf(ρ) = Hopf(ρ, μ) with (C, κ) = (H, μ). */
HopfCoring hopf(const ComodAlgebra& ca);

/* Cof(Γ) = R⊗_H K with the coalgebra structure pushed down from K (kernel
 * containment is checked exactly) and right K-action induced by μ_K. */
struct CofResult {
  ModuleCoalgebra mc;    // over the target bialgebra K
  QuotientComplex pres;  // K ↠ Cof(Γ)

  const ChainMap& pi() const { return pres.projection; }
};
CofResult cof(const BialgebraMap& gamma);

/* A morphism (Γ, φ) of comodule algebras: Γ: H→K and φ: Γ_*(A)→B. */
struct ComodAlgMorphism {
  BialgebraMap gamma;
  ComodAlgebra src;  // (H, A, ρ_A)
  ComodAlgebra tgt;  // (K, B, ρ_B)
  AlgebraMap phi;    // A → B
};
CheckReport verify_comod_alg_morphism(const ComodAlgMorphism& m);

/* A coring morphism (A,C) → (B,D) over a base change φ: A→B. */
struct CoringMorphism {
  AlgebraMap base;
  std::shared_ptr<const Coring> src;  // over base.src
  std::shared_ptr<const Coring> tgt;  // over base.tgt
  ChainMap map;                       // C → D, φ-linear on both sides
};
CheckReport verify_coring_morphism(const CoringMorphism& f);

/* Factorization as a change of rings followed by a change of corings:
 * canonical: C → φ_*(C), c ↦ [1⊗c⊗1]; corings: [b⊗c⊗b'] ↦ b·f(c)·b'.
 * The composite corings∘canonical equals the original map. */
struct CoringMorphismStages {
  PushforwardCoring rings;  // φ_*(C) over B
  ChainMap canonical;       // C → φ_*(C)
  CoringMap corings;        // φ_*(C) → D over B
};
CoringMorphismStages factor_coring_morphism(const CoringMorphism& f);

/* Gal(Γ,φ): Desc(φ) → Hopf(ρ_B, μ̄ on Cof(Γ)), the coring morphism over B
 * given by (μ̄_B ⊗ π_Γ)(B⊗_A ρ_B); always a coring morphism, invertible
 * exactly for Hopf–Galois data. */
struct GaloisData {
  PushforwardCoring desc_coring;
  CofResult cof_gamma;
  HopfCoring hopf_coring;
  CoringMap morphism;  // desc_coring.coring → hopf_coring.coring
};
GaloisData galois(const ComodAlgMorphism& m);

/* The relative-Hopf comparison (μ̄_K ⊗ π_Γ)(K⊗_H Δ_K): K⊗_H K → K⊗Cof(Γ),
 * with a report recording well-definedness and degreewise invertibility. */
struct RelativeHopfCheck {
  CofResult cof_gamma;
  TensorOverResult khk;  // K⊗_H K
  TensorLayout kcof;     // K⊗Cof(Γ)
  ChainMap matrix;       // khk.complex() → kcof.product()
  CheckReport report;

  bool is_relative_hopf() const { return report.passed(); }
};
RelativeHopfCheck relative_hopf_check(const BialgebraMap& gamma);

/* Normal extension with normal basis E along a relative Hopf algebra Γ:
 * A = E⊗H, B = E⊗K, ρ = E⊗Δ, φ = E⊗Γ.  Throws NotRelativeHopf when the
 * comparison map of Γ fails to invert. */
ComodAlgMorphism normal_extension(const DGAlgebra& e, const BialgebraMap& gamma);

/* A^{co H} = eq(ρ, (−)⊗1) with its inherited algebra structure (closure
 * under multiplication is solved for exactly). */
struct CoinvariantAlgebra {
  SubComplex sub;  // inside A
  DGAlgebra alg;   // induced structure on the equalizer
};
CoinvariantAlgebra comod_algebra_coinvariants(const ComodAlgebra& ca);

}  // namespace hhg
