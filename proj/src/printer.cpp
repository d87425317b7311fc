#include "aggrfix/printer.hpp"

#include <sstream>

namespace aggrfix {

namespace {

// term precedence: additive 0, multiplicative 1, primary 2
int term_prec(const Term& t) {
    if (t.kind != TermKind::Arith) return 2;
    return t.op == '*' ? 1 : 0;
}

void pt(std::ostringstream& os, const TermPtr& t, int level) {
    int prec = term_prec(*t);
    bool parens = prec < level;
    if (parens) os << '(';
    switch (t->kind) {
    case TermKind::Var: os << t->var; break;
    case TermKind::Const: os << t->value.str(); break;
    case TermKind::Arith:
        // unary minus is represented as 0 - x
        if (t->op == '-' && t->lhs->kind == TermKind::Const && t->lhs->value.is_number() &&
            t->lhs->value.num == 0) {
            os << '-';
            pt(os, t->rhs, 2);
            break;
        }
        pt(os, t->lhs, t->op == '*' ? 1 : 0);
        os << ' ' << t->op << ' ';
        pt(os, t->rhs, t->op == '*' ? 2 : 1);
        break;
    }
    if (parens) os << ')';
}

// formula precedence: or 0, and 1, unary 2, primary 3; quantifiers take the
// maximal extent, so they are treated as precedence 0.
int formula_prec(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Or:
    case FormulaKind::Exists:
    case FormulaKind::Forall: return 0;
    case FormulaKind::And: return 1;
    case FormulaKind::Not: return 2;
    default: return 3;
    }
}

void pf(std::ostringstream& os, const Signature* sig, const FormulaPtr& f, int level) {
    bool parens = formula_prec(*f) < level;
    if (parens) os << '(';
    switch (f->kind) {
    case FormulaKind::Atom: {
        os << (sig ? sig->pred(f->pred).name : ("pred#" + std::to_string(f->pred)));
        if (!f->args.empty()) {
            os << '(';
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) os << ", ";
                pt(os, f->args[i], 0);
            }
            os << ')';
        }
        break;
    }
    case FormulaKind::GroundAtom: os << "@" << f->atom_index; break;
    case FormulaKind::AggAtom: {
        os << f->agg.name() << "({";
        for (std::size_t i = 0; i < f->bound.size(); ++i) {
            if (i) os << ", ";
            os << f->bound[i].name;
        }
        os << " : ";
        pf(os, sig, f->cond, 0);
        os << "}, ";
        pt(os, f->result, 0);
        os << ')';
        break;
    }
    case FormulaKind::Not:
        os << "not ";
        pf(os, sig, f->child, 2);
        break;
    case FormulaKind::And:
        pf(os, sig, f->left, 1);
        os << " & ";
        pf(os, sig, f->right, 2);
        break;
    case FormulaKind::Or:
        pf(os, sig, f->left, 0);
        os << " | ";
        pf(os, sig, f->right, 1);
        break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
        os << (f->kind == FormulaKind::Exists ? "exists " : "forall ") << f->qvar.name << " : ";
        pf(os, sig, f->child, 0);
        break;
    case FormulaKind::Cmp:
        pt(os, f->t1, 0);
        os << ' ' << cmp_name(f->cmp_op) << ' ';
        pt(os, f->t2, 0);
        break;
    case FormulaKind::BoolConst: os << (f->bval ? "true" : "false"); break;
    }
    if (parens) os << ')';
}

} // namespace

std::string print_term(const TermPtr& t) {
    std::ostringstream os;
    pt(os, t, 0);
    return os.str();
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    pf(os, nullptr, f, 0);
    return os.str();
}

std::string print_rule(const Signature& sig, const Rule& r) {
    std::ostringstream os;
    os << "rule " << sig.pred(r.head_pred).name;
    if (!r.head_args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < r.head_args.size(); ++i) {
            if (i) os << ", ";
            pt(os, r.head_args[i], 0);
        }
        os << ')';
    }
    os << " <- ";
    pf(os, &sig, r.body, 0);
    os << '.';
    return os.str();
}

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (const Sort& s : p.sig.sorts) {
        if (s.int_range) {
            os << "sort " << s.name << " = int(" << s.min_value().str() << ".."
               << s.max_value().str() << ").\n";
            continue;
        }
        os << "sort " << s.name << " = {";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) os << ", ";
            os << s.values[i].str();
        }
        os << "}.\n";
    }
    for (const PredDecl& d : p.sig.preds) {
        os << (d.defined ? "defined " : "pred ") << d.name << '(';
        for (std::size_t i = 0; i < d.arg_sorts.size(); ++i) {
            if (i) os << ", ";
            os << p.sig.sort(d.arg_sorts[i]).name;
        }
        os << ").\n";
    }
    for (const Rule& r : p.rules) os << print_rule(p.sig, r) << '\n';
    for (const Fact& f : p.facts) {
        os << p.sig.pred(f.pred).name;
        if (!f.args.empty()) {
            os << '(';
            for (std::size_t i = 0; i < f.args.size(); ++i) {
                if (i) os << ", ";
                os << f.args[i].str();
            }
            os << ')';
        }
        os << ".\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case TermKind::Var: return a->var == b->var;
    case TermKind::Const: return a->value == b->value;
    case TermKind::Arith:
        return a->op == b->op && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
    }
    return false;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case FormulaKind::Atom: {
        if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
            if (!term_equal(a->args[i], b->args[i])) return false;
        return true;
    }
    case FormulaKind::GroundAtom: return a->atom_index == b->atom_index;
    case FormulaKind::AggAtom: {
        if (a->agg.base != b->agg.base || a->agg.cmp != b->agg.cmp ||
            a->agg.subset_closed != b->agg.subset_closed || a->agg.custom_id != b->agg.custom_id)
            return false;
        if (a->bound.size() != b->bound.size()) return false;
        for (std::size_t i = 0; i < a->bound.size(); ++i)
            if (a->bound[i].name != b->bound[i].name || a->bound[i].sort != b->bound[i].sort)
                return false;
        return formula_equal(a->cond, b->cond) && term_equal(a->result, b->result);
    }
    case FormulaKind::Not: return formula_equal(a->child, b->child);
    case FormulaKind::And:
    case FormulaKind::Or:
        return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
        return a->qvar.name == b->qvar.name && a->qvar.sort == b->qvar.sort &&
               formula_equal(a->child, b->child);
    case FormulaKind::Cmp:
        return a->cmp_op == b->cmp_op && term_equal(a->t1, b->t1) && term_equal(a->t2, b->t2);
    case FormulaKind::BoolConst: return a->bval == b->bval;
    }
    return false;
}

bool program_equal(const Program& a, const Program& b) {
    if (a.sig.sorts.size() != b.sig.sorts.size() || a.sig.preds.size() != b.sig.preds.size())
        return false;
    for (std::size_t i = 0; i < a.sig.sorts.size(); ++i) {
        const Sort &x = a.sig.sorts[i], &y = b.sig.sorts[i];
        if (x.name != y.name || x.values != y.values || x.numeric != y.numeric ||
            x.int_range != y.int_range)
            return false;
    }
    for (std::size_t i = 0; i < a.sig.preds.size(); ++i) {
        const PredDecl &x = a.sig.preds[i], &y = b.sig.preds[i];
        if (x.name != y.name || x.arg_sorts != y.arg_sorts || x.defined != y.defined) return false;
    }
    if (a.rules.size() != b.rules.size() || a.facts.size() != b.facts.size()) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        const Rule &x = a.rules[i], &y = b.rules[i];
        if (x.head_pred != y.head_pred || x.head_args.size() != y.head_args.size()) return false;
        for (std::size_t j = 0; j < x.head_args.size(); ++j)
            if (!term_equal(x.head_args[j], y.head_args[j])) return false;
        if (!formula_equal(x.body, y.body) || x.var_sorts != y.var_sorts) return false;
    }
    for (std::size_t i = 0; i < a.facts.size(); ++i)
        if (a.facts[i].pred != b.facts[i].pred || a.facts[i].args != b.facts[i].args) return false;
    return true;
}

} // namespace aggrfix
