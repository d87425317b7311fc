#ifndef AGGRFIX_ORACLE_HPP
#define AGGRFIX_ORACLE_HPP

#include "aggrfix/aft.hpp"
#include "aggrfix/ground.hpp"

#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

// Brute-force reference implementations used to verify the engine.
// Deliberately naive: plain loops, literal definitions, exhaustive
// enumeration, and no code shared with the main evaluators beyond the AST.

namespace aggrfix::oracle {

struct Budget {
    std::uint64_t max_atoms = 16;
    std::uint64_t max_interval = std::uint64_t(1) << 16;
    std::uint64_t max_subsets = std::uint64_t(1) << 20;
};

// ---- independent evaluation ------------------------------------------------

bool agg2(const AggKind& k, const TupleSet& s, const Value& d, const Budget& b,
          const AggregateRegistry* reg = nullptr);

// literal forall/exists over the interval of an approximated set
Tv3 brute_ult_aggregate(const AggKind& k, const ThreeValuedSet& s, const Value& d, const Budget& b,
                        const AggregateRegistry* reg = nullptr);
// triv / ult / bnd, all by enumeration
Tv3 agg3(Family fam, const AggKind& k, const ThreeValuedSet& s, const Value& d, const Budget& b,
         const AggregateRegistry* reg = nullptr);

bool eval2(const Structure& d, const AtomTable& atoms, const AtomSet& i, const FormulaPtr& f,
           const Budget& b);
Tv3 eval3(const Structure& d, const AtomTable& atoms, Family fam, const AtomSet& lo,
          const AtomSet& hi, const FormulaPtr& f, const Budget& b);

AtomSet tp(const GroundProgram& gp, const Structure& d, const AtomSet& i, const Budget& b);
aft::Pair<AtomSet> phi(const GroundProgram& gp, const Structure& d, Family fam,
                       const aft::Pair<AtomSet>& p, const Budget& b);
aft::Pair<AtomSet> ultimate(const GroundProgram& gp, const Structure& d,
                            const aft::Pair<AtomSet>& p, const Budget& b);

// ---- exhaustive model search ------------------------------------------------

std::vector<AtomSet> brute_models(const GroundProgram& gp, const Structure& d, const Budget& b);
std::vector<AtomSet> brute_supported(const GroundProgram& gp, const Structure& d, const Budget& b);
std::vector<AtomSet> brute_minimal_models(const GroundProgram& gp, const Structure& d,
                                          const Budget& b);

// lfp of the family's lower projection pinned at I, compared with I (plus
// tp(I) = I)
bool brute_stable_check(const GroundProgram& gp, const Structure& d, Family fam, const AtomSet& i,
                        const Budget& b);
bool brute_ultimate_stable_check(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                                 const Budget& b);
std::vector<AtomSet> brute_stable_models(const GroundProgram& gp, const Structure& d, Family fam,
                                         const Budget& b);
std::vector<AtomSet> brute_ultimate_stable_models(const GroundProgram& gp, const Structure& d,
                                                  const Budget& b);

aft::Pair<AtomSet> brute_kripke_kleene(const GroundProgram& gp, const Structure& d, Family fam,
                                       const Budget& b);
aft::Pair<AtomSet> brute_ultimate_kripke_kleene(const GroundProgram& gp, const Structure& d,
                                                const Budget& b);

struct BruteWf {
    AtomSet lower, upper;
    bool exact = false;
};
// naive alternating fixpoint run
BruteWf brute_well_founded(const GroundProgram& gp, const Structure& d, Family fam,
                           const Budget& b);
BruteWf brute_ultimate_well_founded(const GroundProgram& gp, const Structure& d, const Budget& b);

// iterated per-stratum least models, with its own ground-level
// stratification
AtomSet brute_standard_model(const GroundProgram& gp, const Structure& d, const Budget& b);

// ---- problem oracles ---------------------------------------------------------

// level-n control iteration over share fractions
std::set<std::pair<Value, Value>> company_control(
    const std::map<std::pair<Value, Value>, Rational>& shares);

// relaxation with negative-cycle detection; pairs that are connected but
// have no shortest path are reported separately
struct ShortestPaths {
    std::map<std::pair<Value, Value>, Rational> dist;
    std::set<std::pair<Value, Value>> no_shortest;
};
ShortestPaths shortest_paths(const std::vector<std::tuple<Value, Value, Rational>>& edges);

} // namespace aggrfix::oracle

#endif
