#include "aggrfix/aggregates.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <set>

namespace aggrfix {

namespace {

Rational first_comp(const Tuple& t) { return t.empty() ? Rational(0) : t[0].num; }

std::vector<Rational> first_components(const TupleSet& s) {
    std::vector<Rational> out;
    out.reserve(s.size());
    for (const Tuple& t : s) out.push_back(first_comp(t));
    return out;
}

// distinct first-component values
std::set<Rational> first_component_set(const TupleSet& s) {
    std::set<Rational> out;
    for (const Tuple& t : s) out.insert(first_comp(t));
    return out;
}

bool all_numeric_first(const TupleSet& s) {
    for (const Tuple& t : s)
        if (t.empty() || !t[0].is_number()) return false;
    return true;
}

TupleSet set_difference(const TupleSet& a, const TupleSet& b) {
    TupleSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

TupleSet set_union(const TupleSet& a, const TupleSet& b) {
    TupleSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

void require_subset_budget(std::size_t n, const EvalCaps& caps, const char* what) {
    if (n >= 63 || (std::uint64_t(1) << n) > caps.max_subsets)
        throw CapacityError(std::string(what) + " over " + std::to_string(n) +
                            " optional tuples exceeds the subset cap");
}

} // namespace

NumRange range_of_sort(const Sort& s) {
    if (!s.numeric || s.values.empty()) return NumRange::unknown();
    return NumRange::of(s.min_value().num, s.max_value().num);
}

std::optional<Rational> agg_function(AggBase base, const TupleSet& s) {
    switch (base) {
    case AggBase::Count: return Rational(static_cast<long>(s.size()));
    case AggBase::Sum: {
        Rational acc(0);
        for (const Tuple& t : s) acc += first_comp(t);
        return acc;
    }
    case AggBase::Prod: {
        Rational acc(1);
        for (const Tuple& t : s) acc *= first_comp(t);
        return acc;
    }
    case AggBase::Min:
    case AggBase::Glb: {
        if (s.empty()) return std::nullopt;
        auto v = first_components(s);
        return *std::min_element(v.begin(), v.end());
    }
    case AggBase::Max:
    case AggBase::Lub: {
        if (s.empty()) return std::nullopt;
        auto v = first_components(s);
        return *std::max_element(v.begin(), v.end());
    }
    case AggBase::Avg: {
        if (s.empty()) return std::nullopt;
        Rational acc(0);
        for (const Tuple& t : s) acc += first_comp(t);
        return acc / Rational(static_cast<long>(s.size()));
    }
    default: return std::nullopt;
    }
}

bool eval_aggregate2(const AggKind& k, const TupleSet& s, const Value& d, const NumRange& range,
                     const EvalCaps& caps, const AggregateRegistry* reg) {
    if (k.base == AggBase::Custom) {
        if (!reg) throw DomainError("custom aggregate kind without a registry");
        return reg->at(k.custom_id).eval2(s, d);
    }
    if (k.subset_closed) return subset_closure_eval(k, s, d, range, caps, reg);
    if (!d.is_number()) return false; // the kinds here relate sets to numbers

    if (k.base == AggBase::Lb || k.base == AggBase::Ub) {
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            if (k.base == AggBase::Lb ? !(d.num <= t[0].num) : !(t[0].num <= d.num)) return false;
        }
        return true;
    }

    std::optional<Rational> f = agg_function(k.base, s);
    if (!f) return false; // partial function, no tuple for this set
    if (!k.cmp) return *f == d.num;
    return cmp_apply(*k.cmp, *f, d.num);
}

bool subset_closure_eval(const AggKind& k, const TupleSet& s, const Value& d,
                         const NumRange& range, const EvalCaps& caps,
                         const AggregateRegistry* reg) {
    AggKind base = k;
    base.subset_closed = false;

    // count over subsets only depends on the achievable cardinalities 0..|s|
    if (base.base == AggBase::Count) {
        if (!d.is_number()) return false;
        for (long n = 0; n <= static_cast<long>(s.size()); ++n) {
            Rational rn(n);
            bool hit = base.cmp ? cmp_apply(*base.cmp, rn, d.num) : rn == d.num;
            if (hit) return true;
        }
        return false;
    }
    // a monotone base relation is its own subset closure
    if (monotonicity(base, range, reg).kind == Mono::Monotone)
        return eval_aggregate2(base, s, d, range, caps, reg);

    require_subset_budget(s.size(), caps, "subset closure");
    std::vector<Tuple> items(s.begin(), s.end());
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << items.size()); ++m) {
        TupleSet sub;
        for (std::size_t i = 0; i < items.size(); ++i)
            if ((m >> i) & 1) sub.insert(items[i]);
        if (eval_aggregate2(base, sub, d, range, caps, reg)) return true;
    }
    return false;
}

MonotonicityTag monotonicity(const AggKind& k, const NumRange& range,
                             const AggregateRegistry* reg) {
    if (k.base == AggBase::Custom) {
        if (!reg) return {Mono::Neither, ""};
        return reg->at(k.custom_id).mono;
    }
    if (k.subset_closed) return {Mono::Monotone, "subset closure"};
    if (k.base == AggBase::Lb || k.base == AggBase::Ub) return {Mono::AntiMonotone, ""};
    if (!k.cmp || *k.cmp == CmpOp::Eq || *k.cmp == CmpOp::Neq) return {Mono::Neither, ""};

    bool ge = *k.cmp == CmpOp::Geq || *k.cmp == CmpOp::Gt;
    switch (k.base) {
    case AggBase::Count: return {ge ? Mono::Monotone : Mono::AntiMonotone, ""};
    case AggBase::Sum:
        if (range.known && range.lo >= 0)
            return {ge ? Mono::Monotone : Mono::AntiMonotone, "values >= 0"};
        if (range.known && range.hi <= 0)
            return {ge ? Mono::AntiMonotone : Mono::Monotone, "values <= 0"};
        return {Mono::Neither, ""};
    case AggBase::Prod:
        if (range.known && range.lo >= 1)
            return {ge ? Mono::Monotone : Mono::AntiMonotone, "values >= 1"};
        if (range.known && range.lo >= 0 && range.hi < 1)
            return {ge ? Mono::AntiMonotone : Mono::Monotone, "values in [0,1)"};
        return {Mono::Neither, ""};
    default: return {Mono::Neither, ""};
    }
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace {

Tv3 exact_eval(const AggKind& k, const TupleSet& s, const Value& d, const NumRange& range,
               const EvalCaps& caps, const AggregateRegistry* reg) {
    return tv_of(eval_aggregate2(k, s, d, range, caps, reg));
}

// Literal interval enumeration: forall / exists over [certain, possible].
Tv3 enumerate_interval(const AggKind& k, const ThreeValuedSet& s, const Value& d,
                       const NumRange& range, const EvalCaps& caps, const AggregateRegistry* reg) {
    TupleSet extras = set_difference(s.possible, s.certain);
    require_subset_budget(extras.size(), caps, "aggregate interval enumeration");
    std::vector<Tuple> items(extras.begin(), extras.end());
    bool all = true, some = false;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << items.size()); ++m) {
        TupleSet member = s.certain;
        for (std::size_t i = 0; i < items.size(); ++i)
            if ((m >> i) & 1) member.insert(items[i]);
        bool in = eval_aggregate2(k, member, d, range, caps, reg);
        all = all && in;
        some = some || in;
    }
    return tv_from_pair(all, some);
}

// Does some subset of `extras` have first components summing to `target`?
// Exact: scaled-integer reachable-sum sets when a shared denominator is
// small enough, plain subset enumeration otherwise.
bool subset_sum_exists(const std::vector<Rational>& extras, const Rational& target,
                       const EvalCaps& caps) {
    BigInt common = denominator(target);
    for (const Rational& v : extras) common = lcm(common, denominator(v));
    if (common <= BigInt(caps.denominator_limit)) {
        std::set<BigInt> sums{BigInt(0)};
        for (const Rational& v : extras) {
            BigInt w = numerator(v) * (common / denominator(v));
            if (w == 0) continue;
            std::set<BigInt> next = sums;
            for (const BigInt& x : sums) next.insert(x + w);
            if (next.size() > caps.max_subsets)
                throw CapacityError("reachable-sum set exceeds the subset cap");
            sums = std::move(next);
        }
        return sums.count(numerator(target) * (common / denominator(target))) > 0;
    }
    require_subset_budget(extras.size(), caps, "subset-sum search");
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << extras.size()); ++m) {
        Rational acc(0);
        for (std::size_t i = 0; i < extras.size(); ++i)
            if ((m >> i) & 1) acc += extras[i];
        if (acc == target) return true;
    }
    return false;
}

// Does some subset of `extras` multiply `start` into `target`? Reachable
// products stay exact as rationals, so no scaling is needed.
bool subset_prod_exists(const Rational& start, const std::vector<Rational>& extras,
                        const Rational& target, const EvalCaps& caps) {
    std::set<Rational> prods{start};
    for (const Rational& v : extras) {
        if (v == 1) continue;
        std::set<Rational> next = prods;
        for (const Rational& x : prods) next.insert(x * v);
        if (next.size() > caps.max_subsets)
            throw CapacityError("reachable-product set exceeds the subset cap");
        prods = std::move(next);
    }
    return prods.count(target) > 0;
}

Tv3 negate_eq(Tv3 eq) { return tv_not(eq); }

// Table rows for the extrema kinds on totally ordered numeric sorts, on the
// projections to first components.
Tv3 ult_minmax(bool is_min, const ThreeValuedSet& s, const Value& d) {
    if (!d.is_number()) return Tv3::False;
    std::set<Rational> v1 = first_component_set(s.certain);
    std::set<Rational> v2 = first_component_set(s.possible);
    bool comp1, comp2;
    if (is_min) {
        comp1 = v1.count(d.num) && !v2.empty() && *v2.begin() == d.num;
        comp2 = v2.count(d.num) && (v1.empty() || *v1.begin() >= d.num);
    } else {
        comp1 = v1.count(d.num) && !v2.empty() && *v2.rbegin() == d.num;
        comp2 = v2.count(d.num) && (v1.empty() || *v1.rbegin() <= d.num);
    }
    return tv_from_pair(comp1, comp2);
}

Tv3 bound_compare(const AggKind& k, const Rational& lo, const Rational& hi, const Value& d) {
    if (!d.is_number()) {
        // numeric relations never hold on symbols; != holds everywhere
        bool neq = k.cmp && *k.cmp == CmpOp::Neq;
        return tv_of(neq);
    }
    const Rational& x = d.num;
    if (!k.cmp || *k.cmp == CmpOp::Eq) {
        if (k.base == AggBase::Count && !is_integer(x)) return Tv3::False;
        return tv_from_pair(lo == x && hi == x, lo <= x && x <= hi);
    }
    switch (*k.cmp) {
    case CmpOp::Neq: {
        if (k.base == AggBase::Count && !is_integer(x)) return Tv3::True;
        return tv_from_pair(!(lo <= x && x <= hi), !(lo == x && hi == x));
    }
    case CmpOp::Geq: return tv_from_pair(lo >= x, hi >= x);
    case CmpOp::Gt: return tv_from_pair(lo > x, hi > x);
    case CmpOp::Leq: return tv_from_pair(hi <= x, lo <= x);
    case CmpOp::Lt: return tv_from_pair(hi < x, lo < x);
    default: return Tv3::False;
    }
}

} // namespace

Tv3 triv_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const NumRange& range,
              const EvalCaps& caps, const AggregateRegistry* reg) {
    if (s.exact()) return exact_eval(k, s.certain, d, range, caps, reg);
    return Tv3::Undef;
}

Tv3 ult_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const NumRange& range,
             const EvalCaps& caps, const AggregateRegistry* reg) {
    if (s.exact()) return exact_eval(k, s.certain, d, range, caps, reg);

    if (k.base == AggBase::Custom) {
        if (reg && reg->at(k.custom_id).ult3) return reg->at(k.custom_id).ult3(s, d);
        return enumerate_interval(k, s, d, range, caps, reg);
    }

    MonotonicityTag tag = monotonicity(k, range, reg);
    if (tag.kind == Mono::Monotone)
        return tv_from_pair(eval_aggregate2(k, s.certain, d, range, caps, reg),
                            eval_aggregate2(k, s.possible, d, range, caps, reg));
    if (tag.kind == Mono::AntiMonotone)
        return tv_from_pair(eval_aggregate2(k, s.possible, d, range, caps, reg),
                            eval_aggregate2(k, s.certain, d, range, caps, reg));

    switch (k.base) {
    case AggBase::Count: {
        Rational lo(static_cast<long>(s.certain.size()));
        Rational hi(static_cast<long>(s.possible.size()));
        // count achieves every cardinality between the boundary sizes, so
        // the equality case is an interval test and != is its negation
        if (!k.cmp || *k.cmp == CmpOp::Eq || *k.cmp == CmpOp::Neq)
            return bound_compare(k, lo, hi, d);
        break;
    }
    case AggBase::Sum: {
        if (!all_numeric_first(s.possible)) break;
        TupleSet extras = set_difference(s.possible, s.certain);
        if (!k.cmp || *k.cmp == CmpOp::Eq || *k.cmp == CmpOp::Neq) {
            if (!d.is_number()) return tv_of(k.cmp && *k.cmp == CmpOp::Neq);
            Rational base = *agg_function(AggBase::Sum, s.certain);
            bool extras_all_zero = true;
            for (const Tuple& t : extras) extras_all_zero = extras_all_zero && first_comp(t) == 0;
            bool comp1 = base == d.num && extras_all_zero;
            bool comp2 = subset_sum_exists(first_components(extras), d.num - base, caps);
            Tv3 eq = tv_from_pair(comp1, comp2);
            return (k.cmp && *k.cmp == CmpOp::Neq) ? negate_eq(eq) : eq;
        }
        auto [lo_set, hi_set] = lminmax(AggBase::Sum, s, caps);
        return bound_compare(k, *agg_function(AggBase::Sum, lo_set),
                             *agg_function(AggBase::Sum, hi_set), d);
    }
    case AggBase::Prod: {
        if (!all_numeric_first(s.possible)) break;
        TupleSet extras = set_difference(s.possible, s.certain);
        if (!k.cmp || *k.cmp == CmpOp::Eq || *k.cmp == CmpOp::Neq) {
            if (!d.is_number()) return tv_of(k.cmp && *k.cmp == CmpOp::Neq);
            Rational base = *agg_function(AggBase::Prod, s.certain);
            bool extras_all_one = true;
            for (const Tuple& t : extras) extras_all_one = extras_all_one && first_comp(t) == 1;
            bool comp1 = base == d.num && (d.num == 0 || extras_all_one);
            bool comp2 = subset_prod_exists(base, first_components(extras), d.num, caps);
            Tv3 eq = tv_from_pair(comp1, comp2);
            return (k.cmp && *k.cmp == CmpOp::Neq) ? negate_eq(eq) : eq;
        }
        auto [lo_set, hi_set] = lminmax(AggBase::Prod, s, caps);
        return bound_compare(k, *agg_function(AggBase::Prod, lo_set),
                             *agg_function(AggBase::Prod, hi_set), d);
    }
    case AggBase::Min:
    case AggBase::Glb:
        if (!k.cmp || *k.cmp == CmpOp::Eq)
            if (all_numeric_first(s.possible)) return ult_minmax(true, s, d);
        break;
    case AggBase::Max:
    case AggBase::Lub:
        if (!k.cmp || *k.cmp == CmpOp::Eq)
            if (all_numeric_first(s.possible)) return ult_minmax(false, s, d);
        break;
    default: break;
    }
    return enumerate_interval(k, s, d, range, caps, reg);
}

std::pair<TupleSet, TupleSet> lminmax(AggBase base, const ThreeValuedSet& s, const EvalCaps& caps) {
    switch (base) {
    case AggBase::Count: return {s.certain, s.possible};
    case AggBase::Sum: {
        TupleSet lo, hi;
        for (const Tuple& t : s.certain) (first_comp(t) >= 0 ? lo : hi).insert(t);
        for (const Tuple& t : s.possible) (first_comp(t) < 0 ? lo : hi).insert(t);
        return {lo, hi};
    }
    case AggBase::Prod: {
        bool nonneg = true;
        for (const Tuple& t : s.possible) nonneg = nonneg && first_comp(t) >= 0;
        if (nonneg) {
            TupleSet lo, hi;
            for (const Tuple& t : s.certain) (first_comp(t) >= 1 ? lo : hi).insert(t);
            for (const Tuple& t : s.possible) (first_comp(t) < 1 ? lo : hi).insert(t);
            return {lo, hi};
        }
        // negative factors: no closed form here; enumerate the interval and
        // take the first witnesses in canonical order
        TupleSet extras = set_difference(s.possible, s.certain);
        require_subset_budget(extras.size(), caps, "product witness search");
        std::vector<Tuple> items(extras.begin(), extras.end());
        TupleSet lo_set, hi_set;
        std::optional<Rational> lo, hi;
        for (std::uint64_t m = 0; m < (std::uint64_t(1) << items.size()); ++m) {
            TupleSet member = s.certain;
            for (std::size_t i = 0; i < items.size(); ++i)
                if ((m >> i) & 1) member.insert(items[i]);
            Rational p = *agg_function(AggBase::Prod, member);
            if (!lo || p < *lo) {
                lo = p;
                lo_set = member;
            }
            if (!hi || p > *hi) {
                hi = p;
                hi_set = member;
            }
        }
        return {lo_set, hi_set};
    }
    default: throw DomainError("interval witnesses are defined for count/sum/prod only");
    }
}

Tv3 bnd_eval(const AggKind& k, const ThreeValuedSet& s, const Value& d, const EvalCaps& caps) {
    if (k.base != AggBase::Count && k.base != AggBase::Sum && k.base != AggBase::Prod)
        throw DomainError("the bound family covers count/sum/prod only, not " + k.name());
    if (k.subset_closed) throw DomainError("the bound family does not cover subset closures");
    if ((k.base == AggBase::Sum || k.base == AggBase::Prod) && !all_numeric_first(s.possible))
        throw DomainError("sum/prod need numeric first components");
    auto [lo_set, hi_set] = lminmax(k.base, s, caps);
    return bound_compare(k, *agg_function(k.base, lo_set), *agg_function(k.base, hi_set), d);
}

const char* family_name(Family f) {
    switch (f) {
    case Family::Triv: return "triv";
    case Family::Ult: return "ult";
    case Family::Bnd: return "bnd";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "triv") return Family::Triv;
    if (name == "ult") return Family::Ult;
    if (name == "bnd") return Family::Bnd;
    return std::nullopt;
}

Tv3 family_eval(Family fam, const AggKind& k, const ThreeValuedSet& s, const Value& d,
                const NumRange& range, const EvalCaps& caps, const AggregateRegistry* reg) {
    switch (fam) {
    case Family::Triv: return triv_eval(k, s, d, range, caps, reg);
    case Family::Ult: return ult_eval(k, s, d, range, caps, reg);
    case Family::Bnd: return bnd_eval(k, s, d, caps);
    }
    return Tv3::Undef;
}

} // namespace aggrfix
