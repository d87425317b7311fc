#ifndef AGGRFIX_AST_HPP
#define AGGRFIX_AST_HPP

#include "aggrfix/core.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aggrfix {

using SortId = int;
using PredId = int;

// ---------------------------------------------------------------------------
// Sorts: finite enumerated domains or bounded integer ranges. Numeric sorts
// keep their values sorted ascending.
// ---------------------------------------------------------------------------
struct Sort {
    std::string name;
    std::vector<Value> values;
    bool numeric = false;
    bool int_range = false; // declared as int(lo..hi)

    bool contains(const Value& v) const;
    // Range of the values, for range-dependent monotonicity checks.
    const Value& min_value() const { return values.front(); }
    const Value& max_value() const { return values.back(); }
};

struct PredDecl {
    std::string name;
    std::vector<SortId> arg_sorts;
    bool defined = false; // in the defined set, as opposed to pre-defined
};

struct Signature {
    std::vector<Sort> sorts;
    std::vector<PredDecl> preds;
    std::map<std::string, SortId> sort_ids;
    std::map<std::string, PredId> pred_ids;
    // Symbolic domain constants, mapped to the sort that declares them.
    std::map<std::int32_t, SortId> constant_sorts;

    SortId find_sort(const std::string& n) const;
    PredId find_pred(const std::string& n) const;
    const Sort& sort(SortId s) const { return sorts[static_cast<std::size_t>(s)]; }
    const PredDecl& pred(PredId p) const { return preds[static_cast<std::size_t>(p)]; }
};

// ---------------------------------------------------------------------------
// Terms: variables, domain constants, built-in arithmetic.
// ---------------------------------------------------------------------------
enum class TermKind { Var, Const, Arith };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    std::string var;   // Var
    Value value;       // Const
    char op = 0;       // Arith: '+', '-', '*'
    TermPtr lhs, rhs;  // Arith

    static TermPtr make_var(std::string name);
    static TermPtr make_const(Value v);
    static TermPtr make_arith(char op, TermPtr l, TermPtr r);
};

// ---------------------------------------------------------------------------
// Aggregate kinds: a base aggregate, an optional comparison it is composed
// with (graph equality when absent), and an optional subset closure.
// Custom kinds refer into an AggregateRegistry slot.
// ---------------------------------------------------------------------------
enum class AggBase { Count, Sum, Prod, Min, Max, Avg, Glb, Lub, Lb, Ub, Custom };
enum class CmpOp { Eq, Neq, Leq, Geq, Lt, Gt };

struct AggKind {
    AggBase base = AggBase::Count;
    std::optional<CmpOp> cmp;
    bool subset_closed = false;
    int custom_id = -1;

    std::string name() const;
};

const char* cmp_name(CmpOp op); // "=", "!=", ...
bool cmp_apply(CmpOp op, const Rational& a, const Rational& b);

// ---------------------------------------------------------------------------
// Formulas.
// ---------------------------------------------------------------------------
enum class FormulaKind {
    Atom,      // p(t...) over a defined or pre-defined predicate
    GroundAtom,// resolved defined atom (index into the ground base)
    AggAtom,   // R({x... : cond}, t)
    Not,
    And,
    Or,
    Exists,
    Forall,
    Cmp,       // t1 op t2
    BoolConst
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct VarBind {
    std::string name;
    SortId sort = -1;
};

struct Formula {
    FormulaKind kind;

    PredId pred = -1;              // Atom
    std::vector<TermPtr> args;     // Atom
    int atom_index = -1;           // GroundAtom

    AggKind agg;                   // AggAtom
    std::vector<VarBind> bound;    // AggAtom set-expression tuple variables
    FormulaPtr cond;               // AggAtom condition
    TermPtr result;                // AggAtom result term

    FormulaPtr child;              // Not / Exists / Forall
    FormulaPtr left, right;        // And / Or
    VarBind qvar;                  // Exists / Forall

    CmpOp cmp_op = CmpOp::Eq;      // Cmp
    TermPtr t1, t2;                // Cmp

    bool bval = false;             // BoolConst

    static FormulaPtr make_atom(PredId p, std::vector<TermPtr> args);
    static FormulaPtr make_ground_atom(int index);
    static FormulaPtr make_agg(AggKind k, std::vector<VarBind> bound, FormulaPtr cond, TermPtr result);
    static FormulaPtr make_not(FormulaPtr f);
    static FormulaPtr make_and(FormulaPtr l, FormulaPtr r);
    static FormulaPtr make_or(FormulaPtr l, FormulaPtr r);
    static FormulaPtr make_quant(FormulaKind k, VarBind v, FormulaPtr f);
    static FormulaPtr make_cmp(CmpOp op, TermPtr a, TermPtr b);
    static FormulaPtr make_bool(bool b);
};

// ---------------------------------------------------------------------------
// Rules and programs. Facts over pre-defined predicates populate the
// structure; facts over defined predicates act as rules with a true body.
// ---------------------------------------------------------------------------
struct Rule {
    PredId head_pred = -1;
    std::vector<TermPtr> head_args;
    FormulaPtr body;
    // Free variables of the rule with their inferred sorts; the grounding
    // domain of the rule.
    std::map<std::string, SortId> var_sorts;
    int line = 0;
};

struct Fact {
    PredId pred = -1;
    Tuple args;
    int line = 0;
};

struct Program {
    Signature sig;
    std::vector<Rule> rules;
    std::vector<Fact> facts;
};

struct Diagnostic {
    int line = 0;
    int col = 0;
    std::string message;

    std::string str() const;
};

} // namespace aggrfix

#endif
