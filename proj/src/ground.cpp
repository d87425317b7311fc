#include "aggrfix/ground.hpp"

#include "aggrfix/error.hpp"

#include <functional>
#include <set>

namespace aggrfix {

namespace {

class Grounder {
public:
    Grounder(const Program& prog, const Structure& d, const EvalCaps& caps)
        : prog_(prog), d_(d), caps_(caps) {}

    GroundProgram run() {
        GroundProgram gp;
        gp.atoms = ground_base(d_);
        out_ = &gp;
        for (const Fact& f : prog_.facts) {
            if (!prog_.sig.pred(f.pred).defined) continue;
            int idx = gp.atoms.find(f.pred, f.args);
            if (idx < 0) throw InternalError("fact outside the ground base");
            gp.rules.push_back({idx, Formula::make_bool(true)});
        }
        for (const Rule& r : prog_.rules) ground_rule(r);
        return gp;
    }

private:
    void ground_rule(const Rule& r) {
        std::vector<std::pair<std::string, SortId>> vars(r.var_sorts.begin(), r.var_sorts.end());
        // instance-count guard
        double est = 1;
        for (auto& [_, s] : vars) est *= static_cast<double>(prog_.sig.sort(s).values.size());
        if (est > 5e6) throw CapacityError("rule instantiation exceeds 5e6 instances");
        Env env;
        enumerate(r, vars, env);
    }

    void enumerate(const Rule& r, const std::vector<std::pair<std::string, SortId>>& vars,
                   Env& env) {
        if (env.size() == vars.size()) {
            emit(r, env);
            return;
        }
        const auto& [name, sort] = vars[env.size()];
        for (const Value& v : prog_.sig.sort(sort).values) {
            env.emplace_back(name, v);
            enumerate(r, vars, env);
            env.pop_back();
        }
    }

    void emit(const Rule& r, const Env& env) {
        // heads whose evaluated terms leave their sort are dropped
        Tuple head;
        const PredDecl& decl = prog_.sig.pred(r.head_pred);
        for (std::size_t i = 0; i < r.head_args.size(); ++i) {
            Value v = eval_term(r.head_args[i], env);
            if (!prog_.sig.sort(decl.arg_sorts[i]).contains(v)) {
                ++out_->truncation;
                return;
            }
            head.push_back(std::move(v));
        }
        int idx = out_->atoms.find(r.head_pred, head);
        if (idx < 0) throw InternalError("well-sorted head missing from the ground base");
        FormulaPtr body = subst(r.body, env);
        if (body->kind == FormulaKind::BoolConst && !body->bval) return; // can never fire
        out_->rules.push_back({idx, std::move(body)});
    }

    // ---- substitution and partial evaluation ------------------------------

    bool term_closed(const TermPtr& t, const std::set<std::string>& shadowed, const Env& env) {
        switch (t->kind) {
        case TermKind::Const: return true;
        case TermKind::Var: return !shadowed.count(t->var) && env_lookup(env, t->var) != nullptr;
        case TermKind::Arith:
            return term_closed(t->lhs, shadowed, env) && term_closed(t->rhs, shadowed, env);
        }
        return false;
    }

    TermPtr subst_term(const TermPtr& t, const std::set<std::string>& shadowed, const Env& env) {
        switch (t->kind) {
        case TermKind::Const: return t;
        case TermKind::Var: {
            if (shadowed.count(t->var)) return t;
            const Value* v = env_lookup(env, t->var);
            return v ? Term::make_const(*v) : t;
        }
        case TermKind::Arith: {
            TermPtr l = subst_term(t->lhs, shadowed, env);
            TermPtr r = subst_term(t->rhs, shadowed, env);
            if (l->kind == TermKind::Const && r->kind == TermKind::Const)
                return Term::make_const(eval_term(Term::make_arith(t->op, l, r), {}));
            return Term::make_arith(t->op, l, r);
        }
        }
        return t;
    }

    FormulaPtr subst(const FormulaPtr& f, const Env& env) {
        std::set<std::string> shadowed;
        return subst_rec(f, shadowed, env);
    }

    FormulaPtr subst_rec(const FormulaPtr& f, std::set<std::string>& shadowed, const Env& env) {
        switch (f->kind) {
        case FormulaKind::BoolConst:
        case FormulaKind::GroundAtom: return f;
        case FormulaKind::Atom: {
            std::vector<TermPtr> args;
            bool closed = true;
            for (const TermPtr& a : f->args) {
                args.push_back(subst_term(a, shadowed, env));
                closed = closed && args.back()->kind == TermKind::Const;
            }
            if (!closed) return Formula::make_atom(f->pred, std::move(args));
            Tuple vals;
            for (const TermPtr& a : args) vals.push_back(a->value);
            const PredDecl& decl = prog_.sig.pred(f->pred);
            for (std::size_t i = 0; i < vals.size(); ++i) {
                if (!prog_.sig.sort(decl.arg_sorts[i]).contains(vals[i])) {
                    ++out_->truncation; // value escaped its sort: the atom is false
                    return Formula::make_bool(false);
                }
            }
            if (decl.defined) {
                int idx = out_->atoms.find(f->pred, vals);
                if (idx < 0) throw InternalError("well-sorted atom missing from the ground base");
                return Formula::make_ground_atom(idx);
            }
            return Formula::make_bool(d_.holds(f->pred, vals));
        }
        case FormulaKind::Not: {
            FormulaPtr c = subst_rec(f->child, shadowed, env);
            if (c->kind == FormulaKind::BoolConst) return Formula::make_bool(!c->bval);
            return Formula::make_not(std::move(c));
        }
        case FormulaKind::And: {
            FormulaPtr l = subst_rec(f->left, shadowed, env);
            if (l->kind == FormulaKind::BoolConst && !l->bval) return l;
            FormulaPtr r = subst_rec(f->right, shadowed, env);
            if (r->kind == FormulaKind::BoolConst && !r->bval) return r;
            if (l->kind == FormulaKind::BoolConst) return r;
            if (r->kind == FormulaKind::BoolConst) return l;
            return Formula::make_and(std::move(l), std::move(r));
        }
        case FormulaKind::Or: {
            FormulaPtr l = subst_rec(f->left, shadowed, env);
            if (l->kind == FormulaKind::BoolConst && l->bval) return l;
            FormulaPtr r = subst_rec(f->right, shadowed, env);
            if (r->kind == FormulaKind::BoolConst && r->bval) return r;
            if (l->kind == FormulaKind::BoolConst) return r;
            if (r->kind == FormulaKind::BoolConst) return l;
            return Formula::make_or(std::move(l), std::move(r));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool added = shadowed.insert(f->qvar.name).second;
            FormulaPtr c = subst_rec(f->child, shadowed, env);
            if (added) shadowed.erase(f->qvar.name);
            if (c->kind == FormulaKind::BoolConst) return c; // sorts are non-empty
            return Formula::make_quant(f->kind, f->qvar, std::move(c));
        }
        case FormulaKind::Cmp: {
            TermPtr a = subst_term(f->t1, shadowed, env);
            TermPtr b = subst_term(f->t2, shadowed, env);
            if (a->kind == TermKind::Const && b->kind == TermKind::Const) {
                const Value &x = a->value, &y = b->value;
                bool numeric = x.is_number() && y.is_number();
                bool res;
                if (numeric) {
                    res = cmp_apply(f->cmp_op, x.num, y.num);
                } else if (f->cmp_op == CmpOp::Eq) {
                    res = x == y;
                } else if (f->cmp_op == CmpOp::Neq) {
                    res = x != y;
                } else {
                    res = false; // order on symbols never holds
                }
                return Formula::make_bool(res);
            }
            return Formula::make_cmp(f->cmp_op, std::move(a), std::move(b));
        }
        case FormulaKind::AggAtom: {
            std::vector<std::string> added;
            for (const VarBind& b : f->bound)
                if (shadowed.insert(b.name).second) added.push_back(b.name);
            FormulaPtr cond = subst_rec(f->cond, shadowed, env);
            for (const std::string& n : added) shadowed.erase(n);
            TermPtr result = subst_term(f->result, shadowed, env);
            return Formula::make_agg(f->agg, f->bound, std::move(cond), std::move(result));
        }
        }
        return f;
    }

    const Program& prog_;
    const Structure& d_;
    const EvalCaps& caps_;
    GroundProgram* out_ = nullptr;
};

} // namespace

GroundProgram instantiate(const Program& prog, const Structure& d, const EvalCaps& caps) {
    Grounder g(prog, d, caps);
    return g.run();
}

} // namespace aggrfix
