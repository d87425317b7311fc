#ifndef AGGRFIX_GROUND_HPP
#define AGGRFIX_GROUND_HPP

#include "aggrfix/structure.hpp"

#include <cstdint>
#include <vector>

namespace aggrfix {

struct GroundRule {
    int head = -1;    // index into the ground base
    FormulaPtr body;  // closed; rule-level variables substituted away
};

struct GroundProgram {
    AtomTable atoms;
    std::vector<GroundRule> rules;
    // arithmetic escaped a declared sort during grounding: instances dropped
    // or atoms falsified
    std::uint64_t truncation = 0;
};

// All closed rule instances over the structure's domains. Head terms are
// evaluated; instances whose head leaves its sort are dropped (counted as
// truncation). Bodies are partially evaluated: closed terms folded, rigid
// subformulas decided, defined atoms resolved to ground-base indices.
// Facts over defined predicates become rules with a true body.
GroundProgram instantiate(const Program& prog, const Structure& d, const EvalCaps& caps);

} // namespace aggrfix

#endif
