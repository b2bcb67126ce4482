#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhg/cobar.hpp"
#include "hhg/galois.hpp"

namespace hhg {

/* ------------------------------------------------------------------ */
/* Verdicts                                                            */
/* ------------------------------------------------------------------ */

enum class Outcome { Pass, Fail, NotDecided, NotApplicable };
const char* to_string(Outcome o);
/* Conjunction: any Fail fails, else any NotDecided is undecided;
 * NotApplicable is neutral. */
Outcome combine(Outcome a, Outcome b);

/* One line of the inference ledger: a named hypothesis or conclusion,
 * its outcome, and the certificate (exact identity, rank data or
 * quasi-isomorphism evidence) that backs it.  A conclusion line never
 * passes unless every hypothesis line it depends on passed. */
struct LedgerLine {
  std::string claim;
  Outcome outcome = Outcome::NotDecided;
  std::string certificate;
};

/* One row of an evidence table: the per-degree dimensions of the two
 * sides of a comparison and the rank actually achieved (of the matrix
 * itself for exact comparisons, of the induced map on homology for
 * quasi-isomorphism checks). */
struct EvidenceRow {
  std::string item;
  int degree = 0;
  std::size_t dim_source = 0;
  std::size_t dim_target = 0;
  std::size_t rank = 0;
};

struct Verdict {
  std::string check;
  Outcome overall = Outcome::NotDecided;
  std::vector<LedgerLine> ledger;
  std::vector<EvidenceRow> evidence;
  /* Degrees on which the homological claims of this verdict are honest. */
  TrustedRange trusted{0, -1};
  /* Certified inference statements emitted on pass (duality claims &c). */
  std::vector<std::string> statements;

  bool passed() const { return overall == Outcome::Pass; }
  const LedgerLine* line(const std::string& claim_prefix) const;
  std::string summary() const;
};

/* ------------------------------------------------------------------ */
/* Extension problems                                                  */
/* ------------------------------------------------------------------ */

/* A morphism of comodule algebras together with the degree window on
 * which truncated models are built and the optional witnesses the
 * decision procedures may consume:
 *   - filtration: a cellular filtration of B as a left A-module via phi
 *     (flat-cofibrancy witness);
 *   - retract: a degree-0 graded A-linear map r: B -> A with
 *     r o phi = id_A.  A graded splitting is all the cofibrancy
 *     criterion asks for; a chain-level retract need not exist even for
 *     extensions that satisfy descent;
 *   - conilpotent: a split-conilpotent witness for the source bialgebra
 *     H of the structure map (recorded for the descent-equivalence
 *     reading; user-supplied);
 *   - comparison: a user comparison map between the homotopy
 *     coinvariant models, required when the structure map is neither an
 *     identity nor a unit. */
struct ExtensionProblem {
  ComodAlgMorphism morphism;
  DegreeWindow window;
  std::optional<FiltrationWitness> filtration;
  std::optional<GradedMap> retract;
  std::optional<ConilpotentWitness> conilpotent;
  std::optional<ChainMap> comparison;
};

/* Structural checks on every supplied component: the morphism axioms,
 * witness shapes, and the witness verifications themselves. */
CheckReport verify_problem(const ExtensionProblem& p);

/* Assemble and verify; throws AxiomError (morphism) or WitnessError
 * (witnesses) with the first failure. */
ExtensionProblem make_problem(
    ComodAlgMorphism m, DegreeWindow w,
    std::optional<FiltrationWitness> filtration = std::nullopt,
    std::optional<GradedMap> retract = std::nullopt,
    std::optional<ConilpotentWitness> conilpotent = std::nullopt,
    std::optional<ChainMap> comparison = std::nullopt);

/* B as a left A-module through phi (restriction of scalars along phi of
 * the free rank-one module). */
AModule extension_module(const ComodAlgMorphism& m);

/* The canonical fibrant-replacement problem rho_tilde: A -> Omega(A;H;H)
 * over Gamma = id_H, with the word-length cellular filtration and the
 * counit retract pi attached as witnesses. */
ExtensionProblem cobar_descent_problem(const ComodAlgebra& ca, const DegreeWindow& w);

/* The normal-basis problem (eta, Omega(E;K;eta)): Omega(E;K;R) ->
 * Omega(E;K;K) for a K-comodule algebra E, with the filtration by the
 * degree of the last tensor slot and the graded counit retract attached
 * as witnesses. */
ExtensionProblem normal_basis_problem(const ComodAlgebra& e, const DegreeWindow& w);

/* ------------------------------------------------------------------ */
/* Decision procedures                                                 */
/* ------------------------------------------------------------------ */

/* Classical relative Hopf-Galois: the coinvariants comparison
 * phi^{co Gamma}: A^{co H} -> B^{co K} and the Galois coring morphism
 * Desc(phi) -> Hopf(rho_B) are both tested for exact degreewise
 * invertibility; the evidence table records both matrices' ranks.
 * Failures are verdict outcomes, never exceptions. */
Verdict check_classical_hg(const ExtensionProblem& p);

/* Homotopic relative Hopf-Galois via the sufficiency route.  Three
 * ledger lines: (1) the homotopy coinvariants comparison phi^{hco Gamma}
 * is a quasi-isomorphism on the trusted range; (2) the Galois comparison
 * is a quasi-isomorphism; (3) copurity of the Galois comparison via the
 * flat-cofibrant criterion: the source coring is flat (automatic over a
 * field, recorded) and the target coring is coaugmented and
 * flat-cofibrant, certified by the canonical basis filtration of
 * B (x) Cof(Gamma).  Overall pass certifies sufficiency, not necessity.
 * A missing comparison witness for an unsupported structure map yields
 * outcome NotDecided with the IncompleteEvidence condition named. */
Verdict check_homotopic_hg(const ExtensionProblem& p);

/* Effective homotopic descent checklist: verifies the cellular
 * filtration witness of B over A and the retract identity r o phi =
 * id_A together with graded A-linearity of r; on pass records the
 * conclusion "effective homotopic descent holds" as a certified
 * inference.  Missing witnesses yield NotDecided. */
Verdict check_descent_hypotheses(const ExtensionProblem& p);

/* Generalized Koszul duality report.  Requires B augmented (throws
 * IncompleteEvidence otherwise); records the homotopic and descent
 * verdicts as hypotheses, tests that the augmentation B -> R is a
 * quasi-isomorphism (homology = ground field in degree 0 on the trusted
 * range), and on pass emits the equivalence statement "homotopy
 * category of A-modules ~ homotopy category of Cof(Gamma)-comodules"
 * with Cof(Gamma) attached.  On the universal-bundle shape (structure
 * map a unit) the cobar-bar counit of the structure coalgebra is run as
 * a corroborating cross-check. */
Verdict koszul_report(const ExtensionProblem& p);

}  // namespace hhg
