#include "aggrfix/eval.hpp"

#include "aggrfix/error.hpp"

namespace aggrfix {

namespace {

struct Evaluator {
    const Structure& d;
    const AtomTable& atoms;
    const EvalCaps& caps;
    Family fam = Family::Ult;

    // ---- two-valued --------------------------------------------------------

    bool ev2(const AtomSet& i, const FormulaPtr& f, Env& env) {
        switch (f->kind) {
        case FormulaKind::BoolConst: return f->bval;
        case FormulaKind::GroundAtom: return i.test(static_cast<std::size_t>(f->atom_index));
        case FormulaKind::Atom: {
            Tuple vals = eval_args(f, env);
            if (d.sig().pred(f->pred).defined) {
                int idx = atoms.find(f->pred, vals);
                return idx >= 0 && i.test(static_cast<std::size_t>(idx));
            }
            return d.holds(f->pred, vals);
        }
        case FormulaKind::Not: return !ev2(i, f->child, env);
        case FormulaKind::And: return ev2(i, f->left, env) && ev2(i, f->right, env);
        case FormulaKind::Or: return ev2(i, f->left, env) || ev2(i, f->right, env);
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool exists = f->kind == FormulaKind::Exists;
            for (const Value& v : d.sig().sort(f->qvar.sort).values) {
                env.emplace_back(f->qvar.name, v);
                bool r = ev2(i, f->child, env);
                env.pop_back();
                if (exists && r) return true;
                if (!exists && !r) return false;
            }
            return !exists;
        }
        case FormulaKind::Cmp: return cmp_values(f, env);
        case FormulaKind::AggAtom: {
            TupleSet s = setexpr2(i, f, env);
            Value dv = eval_term(f->result, env);
            return eval_aggregate2(f->agg, s, dv, agg_range(f), caps, d.registry());
        }
        }
        throw InternalError("unreachable formula kind");
    }

    TupleSet setexpr2(const AtomSet& i, const FormulaPtr& f, Env& env) {
        TupleSet out;
        enum_tuples(f, 0, env, [&](Env& e) {
            if (ev2(i, f->cond, e)) {
                Tuple t;
                for (std::size_t k = e.size() - f->bound.size(); k < e.size(); ++k)
                    t.push_back(e[k].second);
                out.insert(std::move(t));
            }
        });
        return out;
    }

    // ---- three-valued ------------------------------------------------------

    Tv3 ev3(const AtomSet& lo, const AtomSet& hi, const FormulaPtr& f, Env& env) {
        switch (f->kind) {
        case FormulaKind::BoolConst: return tv_of(f->bval);
        case FormulaKind::GroundAtom: {
            auto idx = static_cast<std::size_t>(f->atom_index);
            return tv_from_pair(lo.test(idx), hi.test(idx));
        }
        case FormulaKind::Atom: {
            Tuple vals = eval_args(f, env);
            if (d.sig().pred(f->pred).defined) {
                int idx = atoms.find(f->pred, vals);
                if (idx < 0) return Tv3::False;
                auto u = static_cast<std::size_t>(idx);
                return tv_from_pair(lo.test(u), hi.test(u));
            }
            return tv_of(d.holds(f->pred, vals));
        }
        case FormulaKind::Not: return tv_not(ev3(lo, hi, f->child, env));
        case FormulaKind::And: {
            Tv3 l = ev3(lo, hi, f->left, env);
            if (l == Tv3::False) return l;
            return tv_and(l, ev3(lo, hi, f->right, env));
        }
        case FormulaKind::Or: {
            Tv3 l = ev3(lo, hi, f->left, env);
            if (l == Tv3::True) return l;
            return tv_or(l, ev3(lo, hi, f->right, env));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool exists = f->kind == FormulaKind::Exists;
            Tv3 acc = exists ? Tv3::False : Tv3::True;
            for (const Value& v : d.sig().sort(f->qvar.sort).values) {
                env.emplace_back(f->qvar.name, v);
                Tv3 r = ev3(lo, hi, f->child, env);
                env.pop_back();
                acc = exists ? tv_or(acc, r) : tv_and(acc, r);
                if (acc == (exists ? Tv3::True : Tv3::False)) break;
            }
            return acc;
        }
        case FormulaKind::Cmp: return tv_of(cmp_values(f, env));
        case FormulaKind::AggAtom: {
            ThreeValuedSet s = setexpr3(lo, hi, f, env);
            Value dv = eval_term(f->result, env);
            return family_eval(fam, f->agg, s, dv, agg_range(f), caps, d.registry());
        }
        }
        throw InternalError("unreachable formula kind");
    }

    ThreeValuedSet setexpr3(const AtomSet& lo, const AtomSet& hi, const FormulaPtr& f, Env& env) {
        ThreeValuedSet out;
        enum_tuples(f, 0, env, [&](Env& e) {
            Tv3 r = ev3(lo, hi, f->cond, e);
            if (r == Tv3::False) return;
            Tuple t;
            for (std::size_t k = e.size() - f->bound.size(); k < e.size(); ++k)
                t.push_back(e[k].second);
            if (r == Tv3::True) out.certain.insert(t);
            out.possible.insert(std::move(t));
        });
        return out;
    }

    // ---- shared helpers ----------------------------------------------------

    Tuple eval_args(const FormulaPtr& f, Env& env) {
        Tuple vals;
        vals.reserve(f->args.size());
        for (const TermPtr& a : f->args) vals.push_back(eval_term(a, env));
        return vals;
    }

    bool cmp_values(const FormulaPtr& f, Env& env) {
        Value a = eval_term(f->t1, env);
        Value b = eval_term(f->t2, env);
        if (a.is_number() && b.is_number()) return cmp_apply(f->cmp_op, a.num, b.num);
        if (f->cmp_op == CmpOp::Eq) return a == b;
        if (f->cmp_op == CmpOp::Neq) return a != b;
        return false; // order on symbols never holds
    }

    NumRange agg_range(const FormulaPtr& f) {
        SortId s = f->bound[0].sort;
        return s >= 0 ? range_of_sort(d.sig().sort(s)) : NumRange::unknown();
    }

    template <class F>
    void enum_tuples(const FormulaPtr& agg, std::size_t k, Env& env, F&& fn) {
        if (k == agg->bound.size()) {
            fn(env);
            return;
        }
        for (const Value& v : d.sig().sort(agg->bound[k].sort).values) {
            env.emplace_back(agg->bound[k].name, v);
            enum_tuples(agg, k + 1, env, fn);
            env.pop_back();
        }
    }
};

} // namespace

bool eval2(const Structure& d, const AtomTable& atoms, const AtomSet& i, const FormulaPtr& f,
           const EvalCaps& caps) {
    Evaluator ev{d, atoms, caps};
    Env env;
    return ev.ev2(i, f, env);
}

Tv3 eval3(const Structure& d, const AtomTable& atoms, Family fam, const AtomSet& lower,
          const AtomSet& upper, const FormulaPtr& f, const EvalCaps& caps) {
    Evaluator ev{d, atoms, caps, fam};
    Env env;
    return ev.ev3(lower, upper, f, env);
}

TupleSet eval_setexpr2(const Structure& d, const AtomTable& atoms, const AtomSet& i,
                       const FormulaPtr& agg, const EvalCaps& caps) {
    if (agg->kind != FormulaKind::AggAtom) throw InternalError("not an aggregate atom");
    Evaluator ev{d, atoms, caps};
    Env env;
    return ev.setexpr2(i, agg, env);
}

ThreeValuedSet eval_setexpr3(const Structure& d, const AtomTable& atoms, Family fam,
                             const AtomSet& lower, const AtomSet& upper, const FormulaPtr& agg,
                             const EvalCaps& caps) {
    if (agg->kind != FormulaKind::AggAtom) throw InternalError("not an aggregate atom");
    Evaluator ev{d, atoms, caps, fam};
    Env env;
    return ev.setexpr3(lower, upper, agg, env);
}

} // namespace aggrfix
