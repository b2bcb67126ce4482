#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hhg/complex.hpp"
#include "hhg/report.hpp"
#include "hhg/tensorops.hpp"

namespace hhg {

/* A differential graded algebra presented by basis-indexed structure maps.
 * `square` is the layout of complex⊗complex clipped to the complex's own
 * window; clipping is harmless because all our objects live in degrees ≥ 0,
 * so no product of basis elements can fall back into the window from above. */
struct DGAlgebra {
  ComplexPtr complex;
  TensorLayout square;
  ChainMap mu;                       // square.product() → complex
  ChainMap eta;                      // ground field → complex
  std::optional<ChainMap> aug;       // complex → ground field

  const FieldSpec& field() const { return complex->field(); }
};

struct DGCoalgebra {
  ComplexPtr complex;
  TensorLayout square;
  ChainMap delta;                    // complex → square.product()
  ChainMap eps;                      // complex → ground field
  std::optional<ChainMap> coaug;     // ground field → complex

  const FieldSpec& field() const { return complex->field(); }
};

/* Algebra and coalgebra structures sharing one complex (and square layout);
 * the unit doubles as coaugmentation and the counit as augmentation. */
struct DGBialgebra {
  DGAlgebra alg;
  DGCoalgebra coalg;

  const ComplexPtr& complex() const { return alg.complex; }
  const FieldSpec& field() const { return alg.field(); }
};

enum class StructureKind { Algebra, Coalgebra, Bialgebra };

/* Exact axiom checks; every failure line names the axiom and a witness. */
CheckReport verify_dg_structure(const DGAlgebra& a);
CheckReport verify_dg_structure(const DGCoalgebra& c);
CheckReport verify_dg_structure(const DGBialgebra& b,
                                StructureKind kind = StructureKind::Bialgebra);

/* Morphism checks (unit/structure squares as exact identities). */
CheckReport verify_algebra_morphism(const ChainMap& f, const DGAlgebra& a, const DGAlgebra& b);
CheckReport verify_coalgebra_morphism(const ChainMap& f, const DGCoalgebra& a,
                                      const DGCoalgebra& b);
CheckReport verify_bialgebra_morphism(const ChainMap& f, const DGBialgebra& a,
                                      const DGBialgebra& b);

/* Table-driven construction helpers: a term is (coefficient, degree, label)
 * of the output basis element. */
struct Term {
  Scalar coef;
  int degree;
  std::string label;
};
using ProductTable =
    std::function<std::vector<Term>(int, const std::string&, int, const std::string&)>;
// terms returned as (coefficient, left degree, left label, right label)
struct CoTerm {
  Scalar coef;
  int left_degree;
  std::string left;
  std::string right;
};
using CoproductTable = std::function<std::vector<CoTerm>(int, const std::string&)>;

ChainMap mu_from_table(const ComplexPtr& a, const TensorLayout& square, const ProductTable& t);
ChainMap delta_from_table(const ComplexPtr& c, const TensorLayout& square,
                          const CoproductTable& t);
/* Unit sending "1" to the given degree-0 basis label; its inverse shape for
 * counits ("1" on `unit_label`, zero elsewhere). */
ChainMap unit_map(const ComplexPtr& a, const std::string& unit_label);
ChainMap counit_map(const ComplexPtr& a, const std::string& unit_label);

/* The ground field as a one-point bialgebra. */
DGBialgebra ground_field_bialgebra(const FieldSpec& f);

/* Exterior Hopf algebra on odd-degree primitive generators; names default to
 * x<degree> when not supplied. Defined over Q unless a field is given. */
DGBialgebra exterior_hopf(const std::vector<int>& degrees,
                          std::vector<std::string> names = {});
DGBialgebra exterior_hopf_over(const FieldSpec& f, const std::vector<int>& degrees,
                               std::vector<std::string> names = {});

/* Truncated tensor algebra with its generators primitive. */
DGBialgebra free_primitive_bialgebra(const GradedVectorSpace& v, const DegreeWindow& w);

/* Tensor product algebra on the hull window: (a⊗b)(a'⊗b') = (−1)^{|b||a'|}
 * aa'⊗bb'; pairs falling above the window multiply to zero (harmless when the
 * window dominates both content tops, a declared truncation otherwise).  The
 * two-factor layout is kept so coactions can be assembled slotwise. */
struct TensorAlgebra {
  DGAlgebra alg;
  TensorLayout layout;
};
TensorAlgebra tensor_product_algebra(const DGAlgebra& a, const DGAlgebra& b);

/* Connectivity gates: no basis below degree 0, H₀ spanned by the unit alone;
 * simply connected additionally demands an empty degree-1 component. */
bool is_connected(const ComplexPtr& x, const ChainMap& unit);
bool is_simply_connected(const ComplexPtr& x, const ChainMap& unit);

/* (μ⊗H)(H⊗Δ): H⊗H → H⊗H, the bialgebra self-test of the Galois condition. */
ChainMap bialgebra_galois_map(const DGBialgebra& h);

/* Degreewise invertibility of a chain map, as a report. */
CheckReport verify_degreewise_iso(const ChainMap& f);

/* Tower of subcoalgebra inclusions: stage t is a per-degree matrix whose
 * columns span C[t] inside C; stage 0 must be the coaugmentation image and
 * the last stage all of C. */
struct ConilpotentWitness {
  std::vector<std::map<int, Matrix>> stages;
};

/* Passes iff consecutive quotients carry zero induced comultiplication;
 * a stage that is not a subcoalgebra throws WitnessError. */
CheckReport verify_split_conilpotent(const DGCoalgebra& c, const ConilpotentWitness& wtn);

}  // namespace hhg
