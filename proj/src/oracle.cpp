#include "aggrfix/oracle.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <functional>

namespace aggrfix::oracle {

namespace {

void need_subsets(std::size_t n, const Budget& b, const char* what) {
    if (n >= 63 || (std::uint64_t(1) << n) > b.max_subsets)
        throw CapacityError(std::string(what) + ": oracle budget exceeded");
}

void need_atoms(const GroundProgram& gp, const Budget& b, const char* what) {
    auto n = static_cast<std::uint64_t>(gp.atoms.size());
    if (n > b.max_atoms || n >= 63)
        throw CapacityError(std::string(what) + ": oracle atom budget exceeded");
}

Value term_value(const TermPtr& t, const Env& env) {
    switch (t->kind) {
    case TermKind::Const: return t->value;
    case TermKind::Var: {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == t->var) return it->second;
        throw InternalError("oracle: unbound variable " + t->var);
    }
    case TermKind::Arith: {
        Value a = term_value(t->lhs, env);
        Value c = term_value(t->rhs, env);
        if (!a.is_number() || !c.is_number()) throw InternalError("oracle: arithmetic on symbols");
        if (t->op == '+') return Value::number(a.num + c.num);
        if (t->op == '-') return Value::number(a.num - c.num);
        return Value::number(a.num * c.num);
    }
    }
    throw InternalError("oracle: bad term");
}

} // namespace

// ---------------------------------------------------------------------------
// Aggregates, the slow literal way
// ---------------------------------------------------------------------------

bool agg2(const AggKind& k, const TupleSet& s, const Value& d, const Budget& b,
          const AggregateRegistry* reg) {
    if (k.base == AggBase::Custom) {
        if (!reg) throw DomainError("oracle: custom aggregate without registry");
        return reg->at(k.custom_id).eval2(s, d);
    }
    if (k.subset_closed) {
        AggKind inner = k;
        inner.subset_closed = false;
        need_subsets(s.size(), b, "oracle subset closure");
        std::vector<Tuple> items(s.begin(), s.end());
        for (std::uint64_t m = 0; m < (std::uint64_t(1) << items.size()); ++m) {
            TupleSet sub;
            for (std::size_t i = 0; i < items.size(); ++i)
                if ((m >> i) & 1) sub.insert(items[i]);
            if (agg2(inner, sub, d, b, reg)) return true;
        }
        return false;
    }
    if (!d.is_number()) return false;

    if (k.base == AggBase::Lb || k.base == AggBase::Ub) {
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            bool ok = k.base == AggBase::Lb ? d.num <= t[0].num : t[0].num <= d.num;
            if (!ok) return false;
        }
        return true;
    }

    // F(s) on first components
    bool defined = true;
    Rational f;
    switch (k.base) {
    case AggBase::Count: f = Rational(static_cast<long>(s.size())); break;
    case AggBase::Sum: {
        f = 0;
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            f += t[0].num;
        }
        break;
    }
    case AggBase::Prod: {
        f = 1;
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            f *= t[0].num;
        }
        break;
    }
    case AggBase::Min:
    case AggBase::Max:
    case AggBase::Glb:
    case AggBase::Lub: {
        defined = !s.empty();
        bool want_min = k.base == AggBase::Min || k.base == AggBase::Glb;
        bool first = true;
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            if (first || (want_min ? t[0].num < f : t[0].num > f)) f = t[0].num;
            first = false;
        }
        break;
    }
    case AggBase::Avg: {
        defined = !s.empty();
        f = 0;
        for (const Tuple& t : s) {
            if (t.empty() || !t[0].is_number()) return false;
            f += t[0].num;
        }
        if (defined) f /= Rational(static_cast<long>(s.size()));
        break;
    }
    default: return false;
    }
    if (!defined) return false;
    if (!k.cmp) return f == d.num;
    return cmp_apply(*k.cmp, f, d.num);
}

namespace {

template <class F>
void each_interval_member(const ThreeValuedSet& s, const Budget& b, F&& fn) {
    TupleSet extras;
    std::set_difference(s.possible.begin(), s.possible.end(), s.certain.begin(), s.certain.end(),
                        std::inserter(extras, extras.begin()));
    need_subsets(extras.size(), b, "oracle interval enumeration");
    std::vector<Tuple> items(extras.begin(), extras.end());
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << items.size()); ++m) {
        TupleSet member = s.certain;
        for (std::size_t i = 0; i < items.size(); ++i)
            if ((m >> i) & 1) member.insert(items[i]);
        fn(member);
    }
}

} // namespace

Tv3 brute_ult_aggregate(const AggKind& k, const ThreeValuedSet& s, const Value& d, const Budget& b,
                        const AggregateRegistry* reg) {
    bool all = true, some = false;
    each_interval_member(s, b, [&](const TupleSet& member) {
        bool in = agg2(k, member, d, b, reg);
        all = all && in;
        some = some || in;
    });
    return tv_from_pair(all, some);
}

Tv3 agg3(Family fam, const AggKind& k, const ThreeValuedSet& s, const Value& d, const Budget& b,
         const AggregateRegistry* reg) {
    switch (fam) {
    case Family::Triv:
        if (s.certain == s.possible) return tv_of(agg2(k, s.certain, d, b, reg));
        return Tv3::Undef;
    case Family::Ult: return brute_ult_aggregate(k, s, d, b, reg);
    case Family::Bnd: {
        if (k.base != AggBase::Count && k.base != AggBase::Sum && k.base != AggBase::Prod)
            throw DomainError("oracle: bnd covers count/sum/prod only");
        // bracket [min F, max F] over the interval, found by enumeration
        bool first = true;
        Rational lo, hi;
        each_interval_member(s, b, [&](const TupleSet& member) {
            Rational f = k.base == AggBase::Count ? Rational(static_cast<long>(member.size()))
                                                  : Rational(0);
            if (k.base == AggBase::Sum)
                for (const Tuple& t : member) f += t[0].num;
            if (k.base == AggBase::Prod) {
                f = 1;
                for (const Tuple& t : member) f *= t[0].num;
            }
            if (first || f < lo) lo = f;
            if (first || f > hi) hi = f;
            first = false;
        });
        if (!d.is_number()) return tv_of(k.cmp && *k.cmp == CmpOp::Neq);
        const Rational& x = d.num;
        if (!k.cmp || *k.cmp == CmpOp::Eq) {
            if (k.base == AggBase::Count && !is_integer(x)) return Tv3::False;
            return tv_from_pair(lo == x && hi == x, lo <= x && x <= hi);
        }
        switch (*k.cmp) {
        case CmpOp::Neq:
            if (k.base == AggBase::Count && !is_integer(x)) return Tv3::True;
            return tv_from_pair(!(lo <= x && x <= hi), !(lo == x && hi == x));
        case CmpOp::Geq: return tv_from_pair(lo >= x, hi >= x);
        case CmpOp::Gt: return tv_from_pair(lo > x, hi > x);
        case CmpOp::Leq: return tv_from_pair(hi <= x, lo <= x);
        case CmpOp::Lt: return tv_from_pair(hi < x, lo < x);
        default: return Tv3::False;
        }
    }
    }
    return Tv3::Undef;
}

// ---------------------------------------------------------------------------
// Formula evaluation, plain recursion without shortcuts
// ---------------------------------------------------------------------------

namespace {

struct OracleEval {
    const Structure& d;
    const AtomTable& atoms;
    const Budget& b;
    Family fam = Family::Ult;

    bool ev2(const AtomSet& i, const FormulaPtr& f, Env& env) {
        switch (f->kind) {
        case FormulaKind::BoolConst: return f->bval;
        case FormulaKind::GroundAtom: return i.test(static_cast<std::size_t>(f->atom_index));
        case FormulaKind::Atom: {
            Tuple vals;
            for (const TermPtr& a : f->args) vals.push_back(term_value(a, env));
            if (d.sig().pred(f->pred).defined) {
                int idx = atoms.find(f->pred, vals);
                return idx >= 0 && i.test(static_cast<std::size_t>(idx));
            }
            return d.holds(f->pred, vals);
        }
        case FormulaKind::Not: return !ev2(i, f->child, env);
        case FormulaKind::And: {
            bool l = ev2(i, f->left, env);
            bool r = ev2(i, f->right, env);
            return l && r;
        }
        case FormulaKind::Or: {
            bool l = ev2(i, f->left, env);
            bool r = ev2(i, f->right, env);
            return l || r;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool acc = f->kind == FormulaKind::Forall;
            for (const Value& v : d.sig().sort(f->qvar.sort).values) {
                env.emplace_back(f->qvar.name, v);
                bool r = ev2(i, f->child, env);
                env.pop_back();
                acc = f->kind == FormulaKind::Exists ? (acc || r) : (acc && r);
            }
            return acc;
        }
        case FormulaKind::Cmp: {
            Value x = term_value(f->t1, env);
            Value y = term_value(f->t2, env);
            if (x.is_number() && y.is_number()) return cmp_apply(f->cmp_op, x.num, y.num);
            if (f->cmp_op == CmpOp::Eq) return x == y;
            if (f->cmp_op == CmpOp::Neq) return !(x == y);
            return false;
        }
        case FormulaKind::AggAtom: {
            TupleSet s;
            tuples(f, 0, env, [&](Env& e) {
                if (ev2(i, f->cond, e)) s.insert(tail_tuple(e, f->bound.size()));
            });
            return agg2(f->agg, s, term_value(f->result, env), b, d.registry());
        }
        }
        throw InternalError("oracle: bad formula");
    }

    Tv3 ev3(const AtomSet& lo, const AtomSet& hi, const FormulaPtr& f, Env& env) {
        switch (f->kind) {
        case FormulaKind::BoolConst: return tv_of(f->bval);
        case FormulaKind::GroundAtom: {
            auto u = static_cast<std::size_t>(f->atom_index);
            return tv_from_pair(lo.test(u), hi.test(u));
        }
        case FormulaKind::Atom: {
            Tuple vals;
            for (const TermPtr& a : f->args) vals.push_back(term_value(a, env));
            if (d.sig().pred(f->pred).defined) {
                int idx = atoms.find(f->pred, vals);
                if (idx < 0) return Tv3::False;
                auto u = static_cast<std::size_t>(idx);
                return tv_from_pair(lo.test(u), hi.test(u));
            }
            return tv_of(d.holds(f->pred, vals));
        }
        case FormulaKind::Not: return tv_not(ev3(lo, hi, f->child, env));
        case FormulaKind::And: return tv_and(ev3(lo, hi, f->left, env), ev3(lo, hi, f->right, env));
        case FormulaKind::Or: return tv_or(ev3(lo, hi, f->left, env), ev3(lo, hi, f->right, env));
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            Tv3 acc = f->kind == FormulaKind::Exists ? Tv3::False : Tv3::True;
            for (const Value& v : d.sig().sort(f->qvar.sort).values) {
                env.emplace_back(f->qvar.name, v);
                Tv3 r = ev3(lo, hi, f->child, env);
                env.pop_back();
                acc = f->kind == FormulaKind::Exists ? tv_or(acc, r) : tv_and(acc, r);
            }
            return acc;
        }
        case FormulaKind::Cmp: {
            Value x = term_value(f->t1, env);
            Value y = term_value(f->t2, env);
            if (x.is_number() && y.is_number()) return tv_of(cmp_apply(f->cmp_op, x.num, y.num));
            if (f->cmp_op == CmpOp::Eq) return tv_of(x == y);
            if (f->cmp_op == CmpOp::Neq) return tv_of(!(x == y));
            return Tv3::False;
        }
        case FormulaKind::AggAtom: {
            ThreeValuedSet s;
            tuples(f, 0, env, [&](Env& e) {
                Tv3 r = ev3(lo, hi, f->cond, e);
                Tuple t = tail_tuple(e, f->bound.size());
                if (r == Tv3::True) s.certain.insert(t);
                if (r != Tv3::False) s.possible.insert(std::move(t));
            });
            return agg3(fam, f->agg, s, term_value(f->result, env), b, d.registry());
        }
        }
        throw InternalError("oracle: bad formula");
    }

    static Tuple tail_tuple(const Env& e, std::size_t k) {
        Tuple t;
        for (std::size_t i = e.size() - k; i < e.size(); ++i) t.push_back(e[i].second);
        return t;
    }

    template <class F>
    void tuples(const FormulaPtr& agg, std::size_t k, Env& env, F&& fn) {
        if (k == agg->bound.size()) {
            fn(env);
            return;
        }
        for (const Value& v : d.sig().sort(agg->bound[k].sort).values) {
            env.emplace_back(agg->bound[k].name, v);
            tuples(agg, k + 1, env, fn);
            env.pop_back();
        }
    }
};

} // namespace

bool eval2(const Structure& d, const AtomTable& atoms, const AtomSet& i, const FormulaPtr& f,
           const Budget& b) {
    OracleEval ev{d, atoms, b};
    Env env;
    return ev.ev2(i, f, env);
}

Tv3 eval3(const Structure& d, const AtomTable& atoms, Family fam, const AtomSet& lo,
          const AtomSet& hi, const FormulaPtr& f, const Budget& b) {
    OracleEval ev{d, atoms, b, fam};
    Env env;
    return ev.ev3(lo, hi, f, env);
}

AtomSet tp(const GroundProgram& gp, const Structure& d, const AtomSet& i, const Budget& b) {
    AtomSet out(static_cast<std::size_t>(gp.atoms.size()));
    for (const GroundRule& r : gp.rules)
        if (eval2(d, gp.atoms, i, r.body, b)) out.set(static_cast<std::size_t>(r.head));
    return out;
}

aft::Pair<AtomSet> phi(const GroundProgram& gp, const Structure& d, Family fam,
                       const aft::Pair<AtomSet>& p, const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    std::vector<Tv3> join(n, Tv3::False);
    for (const GroundRule& r : gp.rules) {
        Tv3 v = eval3(d, gp.atoms, fam, p.lower, p.upper, r.body, b);
        auto h = static_cast<std::size_t>(r.head);
        join[h] = tv_or(join[h], v);
    }
    AtomSet lo(n), hi(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (join[a] == Tv3::True) lo.set(a);
        if (join[a] != Tv3::False) hi.set(a);
    }
    return {lo, hi};
}

aft::Pair<AtomSet> ultimate(const GroundProgram& gp, const Structure& d,
                            const aft::Pair<AtomSet>& p, const Budget& b) {
    std::vector<std::size_t> diff = p.upper.minus(p.lower).indices();
    if (diff.size() >= 63 || (std::uint64_t(1) << diff.size()) > b.max_interval)
        throw CapacityError("oracle: interval budget exceeded");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    AtomSet glb(n), lub(n);
    bool first = true;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << diff.size()); ++m) {
        AtomSet z = p.lower;
        for (std::size_t k = 0; k < diff.size(); ++k)
            if ((m >> k) & 1) z.set(diff[k]);
        AtomSet r = tp(gp, d, z, b);
        if (first) {
            glb = r;
            lub = r;
            first = false;
        } else {
            glb &= r;
            lub |= r;
        }
    }
    return {glb, lub};
}

// ---------------------------------------------------------------------------
// Exhaustive searches
// ---------------------------------------------------------------------------

std::vector<AtomSet> brute_models(const GroundProgram& gp, const Structure& d, const Budget& b) {
    need_atoms(gp, b, "model enumeration");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    std::vector<AtomSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        AtomSet i = AtomSet::from_mask(n, m);
        if (tp(gp, d, i, b).is_subset_of(i)) out.push_back(i);
    }
    return out;
}

std::vector<AtomSet> brute_supported(const GroundProgram& gp, const Structure& d,
                                     const Budget& b) {
    need_atoms(gp, b, "supported enumeration");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    std::vector<AtomSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        AtomSet i = AtomSet::from_mask(n, m);
        if (tp(gp, d, i, b) == i) out.push_back(i);
    }
    return out;
}

std::vector<AtomSet> brute_minimal_models(const GroundProgram& gp, const Structure& d,
                                          const Budget& b) {
    std::vector<AtomSet> all = brute_models(gp, d, b);
    std::vector<AtomSet> out;
    for (const AtomSet& i : all) {
        bool minimal = true;
        for (const AtomSet& j : all)
            if (j != i && j.is_subset_of(i)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(i);
    }
    return out;
}

namespace {

template <class LowerStep>
AtomSet naive_lfp_lower(std::size_t n, LowerStep&& step) {
    AtomSet x(n);
    for (;;) {
        AtomSet next = step(x);
        if (next == x) return x;
        x = next;
    }
}

} // namespace

bool brute_stable_check(const GroundProgram& gp, const Structure& d, Family fam, const AtomSet& i,
                        const Budget& b) {
    if (!(tp(gp, d, i, b) == i)) return false;
    auto n = static_cast<std::size_t>(gp.atoms.size());
    AtomSet fp = naive_lfp_lower(n, [&](const AtomSet& x) { return phi(gp, d, fam, {x, i}, b).lower; });
    return fp == i;
}

bool brute_ultimate_stable_check(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                                 const Budget& b) {
    if (!(tp(gp, d, i, b) == i)) return false;
    auto n = static_cast<std::size_t>(gp.atoms.size());
    AtomSet fp = naive_lfp_lower(n, [&](const AtomSet& x) { return ultimate(gp, d, {x, i}, b).lower; });
    return fp == i;
}

std::vector<AtomSet> brute_stable_models(const GroundProgram& gp, const Structure& d, Family fam,
                                         const Budget& b) {
    need_atoms(gp, b, "stable enumeration");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    std::vector<AtomSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        AtomSet i = AtomSet::from_mask(n, m);
        if (brute_stable_check(gp, d, fam, i, b)) out.push_back(i);
    }
    return out;
}

std::vector<AtomSet> brute_ultimate_stable_models(const GroundProgram& gp, const Structure& d,
                                                  const Budget& b) {
    need_atoms(gp, b, "ultimate stable enumeration");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    std::vector<AtomSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        AtomSet i = AtomSet::from_mask(n, m);
        if (brute_ultimate_stable_check(gp, d, i, b)) out.push_back(i);
    }
    return out;
}

namespace {

template <class Op>
aft::Pair<AtomSet> naive_kk(std::size_t n, Op&& op) {
    aft::Pair<AtomSet> p{AtomSet(n), AtomSet(n).complement()};
    for (;;) {
        aft::Pair<AtomSet> next = op(p);
        if (next == p) return p;
        p = next;
    }
}

template <class Op>
BruteWf naive_wf(std::size_t n, Op&& op) {
    auto upper_fp = [&](const AtomSet& a) {
        AtomSet y = a;
        for (;;) {
            AtomSet next = op(aft::Pair<AtomSet>{a, y}).upper;
            if (next == y) return y;
            y = next;
        }
    };
    auto lower_fp = [&](const AtomSet& j) {
        AtomSet x(n);
        for (;;) {
            AtomSet next = op(aft::Pair<AtomSet>{x, j}).lower;
            if (next == x) return x;
            x = next;
        }
    };
    AtomSet i(n);
    AtomSet j = upper_fp(i);
    for (;;) {
        AtomSet i2 = lower_fp(j);
        if (i2 == i) break;
        i = i2;
        j = upper_fp(i);
    }
    return {i, j, i == j};
}

} // namespace

aft::Pair<AtomSet> brute_kripke_kleene(const GroundProgram& gp, const Structure& d, Family fam,
                                       const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    return naive_kk(n, [&](const aft::Pair<AtomSet>& p) { return phi(gp, d, fam, p, b); });
}

aft::Pair<AtomSet> brute_ultimate_kripke_kleene(const GroundProgram& gp, const Structure& d,
                                                const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    return naive_kk(n, [&](const aft::Pair<AtomSet>& p) { return ultimate(gp, d, p, b); });
}

BruteWf brute_well_founded(const GroundProgram& gp, const Structure& d, Family fam,
                           const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    return naive_wf(n, [&](const aft::Pair<AtomSet>& p) { return phi(gp, d, fam, p, b); });
}

BruteWf brute_ultimate_well_founded(const GroundProgram& gp, const Structure& d, const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    return naive_wf(n, [&](const aft::Pair<AtomSet>& p) { return ultimate(gp, d, p, b); });
}

// ---------------------------------------------------------------------------
// Ground-level stratification and the iterated least model
// ---------------------------------------------------------------------------

namespace {

// atom-level dependencies: (strict?) edges body-atom -> head-atom
void atom_deps(const GroundProgram& gp, const Structure& d, const FormulaPtr& f, bool odd,
               bool in_agg, std::vector<std::pair<int, bool>>& out) {
    switch (f->kind) {
    case FormulaKind::GroundAtom: out.push_back({f->atom_index, odd || in_agg}); break;
    case FormulaKind::Atom: {
        // unresolved defined atom: depend on every atom of the predicate
        if (d.sig().pred(f->pred).defined) {
            for (int a = 0; a < gp.atoms.size(); ++a)
                if (gp.atoms.at(a).pred == f->pred) out.push_back({a, odd || in_agg});
        }
        break;
    }
    case FormulaKind::Not: atom_deps(gp, d, f->child, !odd, in_agg, out); break;
    case FormulaKind::And:
    case FormulaKind::Or:
        atom_deps(gp, d, f->left, odd, in_agg, out);
        atom_deps(gp, d, f->right, odd, in_agg, out);
        break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: atom_deps(gp, d, f->child, odd, in_agg, out); break;
    case FormulaKind::AggAtom: atom_deps(gp, d, f->cond, odd, true, out); break;
    default: break;
    }
}

} // namespace

AtomSet brute_standard_model(const GroundProgram& gp, const Structure& d, const Budget& b) {
    auto n = static_cast<std::size_t>(gp.atoms.size());
    // ground-level levels by relaxation
    std::vector<int> level(n, 1);
    std::vector<std::vector<std::pair<int, bool>>> deps(gp.rules.size());
    for (std::size_t r = 0; r < gp.rules.size(); ++r)
        atom_deps(gp, d, gp.rules[r].body, false, false, deps[r]);
    bool stable = false;
    for (std::size_t round = 0; round <= n + 1 && !stable; ++round) {
        stable = true;
        for (std::size_t r = 0; r < gp.rules.size(); ++r) {
            auto head = static_cast<std::size_t>(gp.rules[r].head);
            for (auto& [atom, strict] : deps[r]) {
                int want = level[static_cast<std::size_t>(atom)] + (strict ? 1 : 0);
                if (level[head] < want) {
                    level[head] = want;
                    stable = false;
                }
            }
        }
    }
    if (!stable) throw UserError("oracle: program is not stratified at ground level");
    int max_level = 1;
    for (std::size_t a = 0; a < n; ++a) max_level = std::max(max_level, level[a]);

    AtomSet acc(n);
    for (int l = 1; l <= max_level; ++l) {
        for (;;) {
            AtomSet next = acc;
            for (const GroundRule& r : gp.rules) {
                if (level[static_cast<std::size_t>(r.head)] != l) continue;
                if (eval2(d, gp.atoms, acc, r.body, b)) next.set(static_cast<std::size_t>(r.head));
            }
            if (next == acc) break;
            acc = next;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Problem oracles
// ---------------------------------------------------------------------------

std::set<std::pair<Value, Value>> company_control(
    const std::map<std::pair<Value, Value>, Rational>& shares) {
    std::set<Value> companies;
    for (auto& [ab, _] : shares) {
        companies.insert(ab.first);
        companies.insert(ab.second);
    }
    auto sh = [&](const Value& a, const Value& b) {
        auto it = shares.find({a, b});
        return it == shares.end() ? Rational(0) : it->second;
    };
    std::set<std::pair<Value, Value>> control;
    for (;;) {
        std::set<std::pair<Value, Value>> next = control;
        for (const Value& a : companies)
            for (const Value& b : companies) {
                Rational total = sh(a, b);
                for (const Value& c : companies)
                    if (control.count({a, c})) total += sh(c, b);
                if (total > Rational(1, 2)) next.insert({a, b});
            }
        if (next == control) return control;
        control = std::move(next);
    }
}

ShortestPaths shortest_paths(const std::vector<std::tuple<Value, Value, Rational>>& edges) {
    std::set<Value> nodes;
    for (auto& [a, b, w] : edges) {
        nodes.insert(a);
        nodes.insert(b);
    }
    ShortestPaths out;
    for (const Value& src : nodes) {
        // paths have at least one edge, so the source's own entry only
        // appears via cycles through it
        std::map<Value, Rational> best; // best path weight src -> x
        std::set<Value> has_path;
        for (std::size_t round = 0; round < nodes.size(); ++round) {
            for (auto& [a, b_, w] : edges) {
                bool from_src_direct = a == src;
                bool via = has_path.count(a) > 0;
                if (!from_src_direct && !via) continue;
                std::vector<Rational> cands;
                if (from_src_direct) cands.push_back(w);
                if (via) cands.push_back(best[a] + w);
                Rational cand = *std::min_element(cands.begin(), cands.end());
                if (!has_path.count(b_) || cand < best[b_]) {
                    best[b_] = cand;
                    has_path.insert(b_);
                }
            }
        }
        // anything that still relaxes sits on or behind a negative cycle
        std::set<Value> unstable;
        for (std::size_t round = 0; round < nodes.size() + 1; ++round) {
            for (auto& [a, b_, w] : edges) {
                bool from_src_direct = a == src;
                bool via = has_path.count(a) > 0;
                if (!from_src_direct && !via) continue;
                std::vector<Rational> cands;
                if (from_src_direct) cands.push_back(w);
                if (via) cands.push_back(best[a] + w);
                Rational cand = *std::min_element(cands.begin(), cands.end());
                if (!has_path.count(b_) || cand < best[b_]) {
                    best[b_] = cand;
                    has_path.insert(b_);
                    unstable.insert(b_);
                }
                if (unstable.count(a)) unstable.insert(b_);
            }
        }
        for (const Value& x : has_path) {
            if (unstable.count(x))
                out.no_shortest.insert({src, x});
            else
                out.dist[{src, x}] = best[x];
        }
    }
    return out;
}

} // namespace aggrfix::oracle
