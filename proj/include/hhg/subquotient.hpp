#pragma once

#include <map>

#include "hhg/complex.hpp"

namespace hhg {

/* A subcomplex presented by per-degree spanning columns inside a total
 * complex.  The induced differential is solved for and re-verified; the
 * retraction is a degreewise splitting of the inclusion (not a chain map in
 * general). */
struct SubComplex {
  ComplexPtr total;
  ComplexPtr sub;
  ChainMap inclusion;    // sub → total
  GradedMap retraction;  // total → sub, retraction∘inclusion = id
};

/* A quotient presented by per-degree relation columns.  The quotient basis
 * is a complementary subset of the total basis, so quotient labels are the
 * representative labels; the section picks those representatives. */
struct QuotientComplex {
  ComplexPtr total;
  ComplexPtr quotient;
  ChainMap projection;  // total → quotient
  GradedMap section;    // quotient → total, projection∘section = id
};

/* Span columns may be dependent; an independent subset is selected.  Throws
 * ShapeError when the span is not closed under the differential. */
SubComplex subcomplex_from_span(const ComplexPtr& x, const std::map<int, Matrix>& span);
QuotientComplex quotient_by_span(const ComplexPtr& x, const std::map<int, Matrix>& span);

/* Degreewise kernel of f−g with the restricted differential. */
SubComplex equalizer(const ChainMap& f, const ChainMap& g);
/* Degreewise cokernel of f−g with the induced differential. */
QuotientComplex coequalizer(const ChainMap& f, const ChainMap& g);

/* t kills the relations of q (checked): the induced map on the quotient. */
ChainMap factor_through(const QuotientComplex& q, const ChainMap& t);
/* t lands inside the subcomplex (checked): the corestriction. */
ChainMap corestrict(const SubComplex& s, const ChainMap& t);
/* t maps relations of qx into relations of qy (checked): induced map. */
ChainMap descend(const QuotientComplex& qx, const QuotientComplex& qy, const ChainMap& t);
/* t maps the subcomplex sx into sy (checked): the restriction. */
ChainMap restrict_between(const SubComplex& sx, const SubComplex& sy, const ChainMap& t);

}  // namespace hhg
