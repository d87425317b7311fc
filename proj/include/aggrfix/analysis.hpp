#ifndef AGGRFIX_ANALYSIS_HPP
#define AGGRFIX_ANALYSIS_HPP

#include "aggrfix/aggregates.hpp"
#include "aggrfix/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aggrfix {

std::set<std::string> free_variables(const FormulaPtr& f);

// Occurrence classification of a predicate in a formula. An occurrence
// inside the condition of an aggregate that is neither monotone nor
// anti-monotone is neutral; otherwise its sign is the parity of negations
// plus anti-monotone aggregate nestings above it.
struct OccurrenceCounts {
    int positive = 0;
    int negative = 0;
    int neutral = 0;
    // occurrences inside any aggregate condition; stratification treats
    // these as strict dependencies regardless of sign
    int in_aggregate = 0;
    // occurrences outside all aggregate conditions, split by negation parity
    int outside_positive = 0;
    int outside_negative = 0;

    int total() const { return positive + negative + neutral; }
};

enum class Polarity { Positive, Negative, Neutral, Mixed, Absent };

OccurrenceCounts count_occurrences(const Signature& sig, const FormulaPtr& f, PredId p,
                                   const AggregateRegistry* reg = nullptr);
Polarity polarity(const Signature& sig, const FormulaPtr& f, PredId p,
                  const AggregateRegistry* reg = nullptr);

// Positive: no defined predicate occurs negatively or neutrally. Negative:
// none occurs positively or neutrally. Formulas without defined predicates
// are both.
bool is_positive_formula(const Signature& sig, const FormulaPtr& f,
                         const AggregateRegistry* reg = nullptr);
bool is_negative_formula(const Signature& sig, const FormulaPtr& f,
                         const AggregateRegistry* reg = nullptr);
// Same, with an explicit set of predicates treated as defined (used for
// per-stratum checks).
bool is_positive_formula(const Signature& sig, const FormulaPtr& f,
                         const std::set<PredId>& defined, const AggregateRegistry* reg);

bool is_definite(const Program& prog, const AggregateRegistry* reg = nullptr);

// Minimal level assignment: positive body occurrences outside aggregates
// need level(q) <= level(p); negative occurrences and occurrences inside
// aggregate atoms need level(q) < level(p). Failure carries a dependency
// cycle through a strict edge.
struct Stratification {
    std::map<PredId, int> levels;
    std::vector<PredId> cycle; // non-empty on failure; cycle[0] repeats at the end
    bool ok() const { return cycle.empty(); }
    int max_level() const;
    std::string describe_cycle(const Signature& sig) const;
};

Stratification stratify(const Program& prog, const AggregateRegistry* reg = nullptr);

} // namespace aggrfix

#endif
