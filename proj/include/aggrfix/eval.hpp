#ifndef AGGRFIX_EVAL_HPP
#define AGGRFIX_EVAL_HPP

#include "aggrfix/aggregates.hpp"
#include "aggrfix/atom_set.hpp"
#include "aggrfix/structure.hpp"

namespace aggrfix {

// Classical two-valued truth of a closed formula in the structure extended
// by interpretation I.
bool eval2(const Structure& d, const AtomTable& atoms, const AtomSet& i, const FormulaPtr& f,
           const EvalCaps& caps);

// Kleene three-valued truth under a partial interpretation (lower, upper),
// with aggregate atoms evaluated by the chosen approximating family.
Tv3 eval3(const Structure& d, const AtomTable& atoms, Family fam, const AtomSet& lower,
          const AtomSet& upper, const FormulaPtr& f, const EvalCaps& caps);

// Set-expression values; exposed for direct tests. `agg` must be an
// aggregate atom.
TupleSet eval_setexpr2(const Structure& d, const AtomTable& atoms, const AtomSet& i,
                       const FormulaPtr& agg, const EvalCaps& caps);
ThreeValuedSet eval_setexpr3(const Structure& d, const AtomTable& atoms, Family fam,
                             const AtomSet& lower, const AtomSet& upper, const FormulaPtr& agg,
                             const EvalCaps& caps);

} // namespace aggrfix

#endif
