#ifndef AGGRFIX_AGGREGATES_HPP
#define AGGRFIX_AGGREGATES_HPP

#include "aggrfix/ast.hpp"
#include "aggrfix/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aggrfix {

// Value range of the first tuple component, taken from the declared sort.
// Monotonicity of sum/prod compositions depends on it.
struct NumRange {
    bool known = false;
    Rational lo, hi;

    static NumRange unknown() { return {}; }
    static NumRange of(Rational lo, Rational hi) { return {true, std::move(lo), std::move(hi)}; }
};

NumRange range_of_sort(const Sort& s);

enum class Mono { Monotone, AntiMonotone, Neither };

struct MonotonicityTag {
    Mono kind = Mono::Neither;
    std::string restriction; // the domain condition under which the tag holds
};

// In-process registration point for additional aggregate kinds: a name, a
// two-valued evaluator, a monotonicity tag, and an optional closed-form
// three-valued evaluator (the interval fallback is used otherwise).
struct CustomAggregate {
    std::string name;
    std::function<bool(const TupleSet&, const Value&)> eval2;
    MonotonicityTag mono;
    std::function<Tv3(const ThreeValuedSet&, const Value&)> ult3; // may be empty
};

class AggregateRegistry {
public:
    int add(CustomAggregate a) {
        entries_.push_back(std::move(a));
        return static_cast<int>(entries_.size()) - 1;
    }
    const CustomAggregate& at(int id) const { return entries_.at(static_cast<std::size_t>(id)); }

private:
    std::vector<CustomAggregate> entries_;
};

// ---------------------------------------------------------------------------
// Two-valued aggregate relations. Tuples act as a multiset of their first
// components for sum/prod/avg and the extrema kinds; count is over whole
// tuples.
// ---------------------------------------------------------------------------
bool eval_aggregate2(const AggKind& k, const TupleSet& s, const Value& d, const NumRange& range,
                     const EvalCaps& caps, const AggregateRegistry* reg = nullptr);

// F(S) for the function kinds; empty for min/max/avg/glb/lub on the empty
// set (partial functions have no tuple there).
std::optional<Rational> agg_function(AggBase base, const TupleSet& s);

// Subset aggregate: true iff some subset of s is in the base relation.
bool subset_closure_eval(const AggKind& k, const TupleSet& s, const Value& d,
                         const NumRange& range, const EvalCaps& caps,
                         const AggregateRegistry* reg = nullptr);

MonotonicityTag monotonicity(const AggKind& k, const NumRange& range,
                             const AggregateRegistry* reg = nullptr);

// ---------------------------------------------------------------------------
// Three-valued approximating families.
// ---------------------------------------------------------------------------

// Least precise family: unknown on every non-exact set.
Tv3 triv_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const NumRange& range,
              const EvalCaps& caps, const AggregateRegistry* reg = nullptr);

// Most precise family: component 1 holds iff every set in the interval is
// in the relation, component 2 iff some set is. Closed forms are used where
// known; otherwise capped interval enumeration.
Tv3 ult_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const NumRange& range,
             const EvalCaps& caps, const AggregateRegistry* reg = nullptr);

// Canonical interval witnesses minimizing / maximizing the aggregate
// function over [certain, possible]. Only for count/sum/prod.
std::pair<TupleSet, TupleSet> lminmax(AggBase base, const ThreeValuedSet& s, const EvalCaps& caps);

// Bound family: brackets the function value between its interval minimum
// and maximum. Only for count/sum/prod (optionally composed with a
// comparison).
Tv3 bnd_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const EvalCaps& caps);

enum class Family { Triv, Ult, Bnd };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

Tv3 family_eval(Family fam, const AggKind& k, const ThreeValuedSet& s, const Value& d,
                const NumRange& range, const EvalCaps& caps,
                const AggregateRegistry* reg = nullptr);

} // namespace aggrfix

#endif
