#include "aggrfix/parser.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace aggrfix {

// ---------------------------------------------------------------------------
// Symbols / Rational helpers
// ---------------------------------------------------------------------------

namespace {
struct SymbolTable {
    std::mutex mu;
    std::unordered_map<std::string, std::int32_t> ids;
    std::vector<std::string> names;
};
SymbolTable& symtab() {
    static SymbolTable t;
    return t;
}
} // namespace

std::int32_t Symbols::intern(const std::string& name) {
    auto& t = symtab();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    auto id = static_cast<std::int32_t>(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

const std::string& Symbols::name(std::int32_t id) {
    auto& t = symtab();
    std::lock_guard<std::mutex> lock(t.mu);
    return t.names[static_cast<std::size_t>(id)];
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

bool ThreeValuedSet::consistent() const {
    return std::includes(possible.begin(), possible.end(), certain.begin(), certain.end());
}

const char* tv_name(Tv3 v) {
    switch (v) {
    case Tv3::False: return "F";
    case Tv3::True: return "T";
    default: return "U";
    }
}

// ---------------------------------------------------------------------------
// AST helpers
// ---------------------------------------------------------------------------

bool Sort::contains(const Value& v) const {
    if (numeric != v.is_number()) return false;
    if (int_range) {
        if (!is_integer(v.num)) return false;
        return min_value().num <= v.num && v.num <= max_value().num;
    }
    if (numeric) return std::binary_search(values.begin(), values.end(), v);
    return std::find(values.begin(), values.end(), v) != values.end();
}

SortId Signature::find_sort(const std::string& n) const {
    auto it = sort_ids.find(n);
    return it == sort_ids.end() ? -1 : it->second;
}

PredId Signature::find_pred(const std::string& n) const {
    auto it = pred_ids.find(n);
    return it == pred_ids.end() ? -1 : it->second;
}

TermPtr Term::make_var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->var = std::move(name);
    return t;
}
TermPtr Term::make_const(Value v) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Const;
    t->value = std::move(v);
    return t;
}
TermPtr Term::make_arith(char op, TermPtr l, TermPtr r) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Arith;
    t->op = op;
    t->lhs = std::move(l);
    t->rhs = std::move(r);
    return t;
}

const char* cmp_name(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Neq: return "!=";
    case CmpOp::Leq: return "<=";
    case CmpOp::Geq: return ">=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

bool cmp_apply(CmpOp op, const Rational& a, const Rational& b) {
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Neq: return a != b;
    case CmpOp::Leq: return a <= b;
    case CmpOp::Geq: return a >= b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Gt: return a > b;
    }
    return false;
}

namespace {
const char* agg_base_name(AggBase b) {
    switch (b) {
    case AggBase::Count: return "count";
    case AggBase::Sum: return "sum";
    case AggBase::Prod: return "prod";
    case AggBase::Min: return "min";
    case AggBase::Max: return "max";
    case AggBase::Avg: return "avg";
    case AggBase::Glb: return "glb";
    case AggBase::Lub: return "lub";
    case AggBase::Lb: return "lb";
    case AggBase::Ub: return "ub";
    case AggBase::Custom: return "custom";
    }
    return "?";
}
const char* cmp_suffix(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "_eq";
    case CmpOp::Neq: return "_neq";
    case CmpOp::Leq: return "_leq";
    case CmpOp::Geq: return "_geq";
    case CmpOp::Lt: return "_lt";
    case CmpOp::Gt: return "_gt";
    }
    return "";
}
} // namespace

std::string AggKind::name() const {
    std::string n = agg_base_name(base);
    if (cmp) n += cmp_suffix(*cmp);
    if (subset_closed) n += "_sub";
    return n;
}

FormulaPtr Formula::make_atom(PredId p, std::vector<TermPtr> args) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Atom;
    f->pred = p;
    f->args = std::move(args);
    return f;
}
FormulaPtr Formula::make_ground_atom(int index) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::GroundAtom;
    f->atom_index = index;
    return f;
}
FormulaPtr Formula::make_agg(AggKind k, std::vector<VarBind> bound, FormulaPtr cond, TermPtr result) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::AggAtom;
    f->agg = k;
    f->bound = std::move(bound);
    f->cond = std::move(cond);
    f->result = std::move(result);
    return f;
}
FormulaPtr Formula::make_not(FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Not;
    f->child = std::move(g);
    return f;
}
FormulaPtr Formula::make_and(FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::And;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}
FormulaPtr Formula::make_or(FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Or;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
}
FormulaPtr Formula::make_quant(FormulaKind k, VarBind v, FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->qvar = std::move(v);
    f->child = std::move(g);
    return f;
}
FormulaPtr Formula::make_cmp(CmpOp op, TermPtr a, TermPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Cmp;
    f->cmp_op = op;
    f->t1 = std::move(a);
    f->t2 = std::move(b);
    return f;
}
FormulaPtr Formula::make_bool(bool b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::BoolConst;
    f->bval = b;
    return f;
}

std::string Diagnostic::str() const {
    std::ostringstream os;
    os << line << ':' << col << ": " << message;
    return os.str();
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Number,
    LParen, RParen, LBrace, RBrace,
    Comma, Dot, DotDot, Colon,
    Eq, Neq, Lt, Leq, Gt, Geq,
    Amp, Pipe, Plus, Minus, Star,
    LArrow, // <-
    End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Rational number;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    Lexer(const std::string& text, std::vector<Diagnostic>& diags) : s_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            Token t;
            t.line = line_;
            t.col = col_;
            if (eof()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                    t.text += get();
                t.kind = Tok::Ident;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t = lex_number(t);
            } else {
                switch (get()) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '{': t.kind = Tok::LBrace; break;
                case '}': t.kind = Tok::RBrace; break;
                case ',': t.kind = Tok::Comma; break;
                case ':': t.kind = Tok::Colon; break;
                case '&': t.kind = Tok::Amp; break;
                case '|': t.kind = Tok::Pipe; break;
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '=': t.kind = Tok::Eq; break;
                case '.':
                    if (!eof() && peek() == '.') {
                        get();
                        t.kind = Tok::DotDot;
                    } else {
                        t.kind = Tok::Dot;
                    }
                    break;
                case '<':
                    if (!eof() && peek() == '-') {
                        get();
                        t.kind = Tok::LArrow;
                    } else if (!eof() && peek() == '=') {
                        get();
                        t.kind = Tok::Leq;
                    } else {
                        t.kind = Tok::Lt;
                    }
                    break;
                case '>':
                    if (!eof() && peek() == '=') {
                        get();
                        t.kind = Tok::Geq;
                    } else {
                        t.kind = Tok::Gt;
                    }
                    break;
                case '!':
                    if (!eof() && peek() == '=') {
                        get();
                        t.kind = Tok::Neq;
                    } else {
                        diags_.push_back({t.line, t.col, "stray '!'"});
                        continue;
                    }
                    break;
                default:
                    diags_.push_back({t.line, t.col, std::string("unexpected character '") + c + "'"});
                    continue;
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char peek2() const { return pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0'; }
    char get() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_ws() {
        for (;;) {
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
            if (!eof() && peek() == '%') {
                while (!eof() && peek() != '\n') get();
                continue;
            }
            return;
        }
    }
    Token lex_number(Token t) {
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
        // "p/q" is a single rational literal when a digit follows the slash
        if (!eof() && peek() == '/' && std::isdigit(static_cast<unsigned char>(peek2()))) {
            get();
            std::string den;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) den += get();
            t.number = Rational(BigInt(digits), BigInt(den));
        } else {
            t.number = Rational(BigInt(digits));
        }
        t.kind = Tok::Number;
        return t;
    }

    const std::string& s_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// Aggregate name table
// ---------------------------------------------------------------------------

const std::map<std::string, AggKind>& agg_names() {
    static const std::map<std::string, AggKind> table = [] {
        std::map<std::string, AggKind> t;
        auto add = [&](AggBase b, const char* n, bool suffixes) {
            t[n] = AggKind{b, std::nullopt, false, -1};
            if (!suffixes) return;
            const std::pair<const char*, CmpOp> sfx[] = {
                {"_eq", CmpOp::Eq},   {"_neq", CmpOp::Neq}, {"_leq", CmpOp::Leq},
                {"_geq", CmpOp::Geq}, {"_lt", CmpOp::Lt},   {"_gt", CmpOp::Gt}};
            for (auto& [s, op] : sfx) t[std::string(n) + s] = AggKind{b, op, false, -1};
        };
        add(AggBase::Count, "count", true);
        add(AggBase::Sum, "sum", true);
        add(AggBase::Prod, "prod", true);
        add(AggBase::Min, "min", true);
        add(AggBase::Max, "max", true);
        add(AggBase::Avg, "avg", true);
        add(AggBase::Glb, "glb", true);
        add(AggBase::Lub, "lub", true);
        add(AggBase::Lb, "lb", false);
        add(AggBase::Ub, "ub", false);
        return t;
    }();
    return table;
}

bool is_keyword(const std::string& s) {
    static const std::set<std::string> kw = {"sort", "defined", "pred", "rule", "not",
                                             "exists", "forall", "true", "false", "int", "rat"};
    return kw.count(s) > 0 || agg_names().count(s) > 0;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(Program& prog, const std::string& text, std::vector<Diagnostic>& diags, bool facts_only)
        : prog_(prog), diags_(diags), facts_only_(facts_only) {
        Lexer lx(text, diags);
        toks_ = lx.run();
    }

    void run() {
        while (cur().kind != Tok::End) {
            std::size_t before = diags_.size();
            try {
                statement();
            } catch (const Diagnostic& d) {
                diags_.push_back(d);
            }
            if (diags_.size() > before) sync();
        }
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw Diagnostic{cur().line, cur().col, msg}; }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
        throw Diagnostic{t.line, t.col, msg};
    }

    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(std::size_t k = 1) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    Token take() { return toks_[pos_++]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_ident(const char* s) const { return at(Tok::Ident) && cur().text == s; }
    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return take();
    }
    void sync() {
        while (!at(Tok::End) && !at(Tok::Dot)) ++pos_;
        if (at(Tok::Dot)) ++pos_;
    }

    // ---- statements ------------------------------------------------------

    void statement() {
        if (at_ident("sort")) return sort_decl();
        if (at_ident("defined")) return pred_decl(true);
        if (at_ident("pred")) return pred_decl(false);
        if (at_ident("rule")) return rule_decl();
        return fact_decl();
    }

    void sort_decl() {
        take();
        Token name = expect(Tok::Ident, "sort name");
        if (is_keyword(name.text)) fail_at(name, "'" + name.text + "' is reserved");
        expect(Tok::Eq, "'='");
        Sort s;
        s.name = name.text;
        if (at(Tok::LBrace)) {
            take();
            parse_value_list(s, Tok::RBrace);
            expect(Tok::RBrace, "'}'");
        } else if (at_ident("int")) {
            take();
            expect(Tok::LParen, "'('");
            Rational lo = signed_int();
            expect(Tok::DotDot, "'..'");
            Rational hi = signed_int();
            expect(Tok::RParen, "')'");
            if (lo > hi) fail_at(name, "empty integer range");
            if (hi - lo > 100000) fail_at(name, "integer range too large");
            for (Rational v = lo; v <= hi; v += 1) s.values.push_back(Value::number(v));
            s.numeric = true;
            s.int_range = true;
        } else if (at_ident("rat")) {
            take();
            expect(Tok::LParen, "'('");
            parse_value_list(s, Tok::RParen);
            expect(Tok::RParen, "')'");
            if (!s.numeric && !s.values.empty()) fail_at(name, "rat(...) takes numeric values");
        } else {
            fail("expected '{', 'int(' or 'rat(' in sort declaration");
        }
        expect(Tok::Dot, "'.'");
        if (s.values.empty()) fail_at(name, "empty sort '" + name.text + "'");
        finish_sort(name, std::move(s));
    }

    void parse_value_list(Sort& s, Tok closer) {
        bool saw_symbol = false, saw_number = false;
        while (!at(closer)) {
            if (!s.values.empty()) expect(Tok::Comma, "','");
            if (at(Tok::Ident)) {
                Token v = take();
                if (is_keyword(v.text)) fail_at(v, "'" + v.text + "' is reserved");
                s.values.push_back(Value::symbol(v.text));
                saw_symbol = true;
            } else {
                s.values.push_back(Value::number(signed_rational()));
                saw_number = true;
            }
        }
        if (saw_symbol && saw_number) fail("sort mixes symbolic and numeric values");
        s.numeric = saw_number;
        if (s.numeric) std::sort(s.values.begin(), s.values.end());
        std::set<Value> seen(s.values.begin(), s.values.end());
        if (seen.size() != s.values.size()) fail("duplicate sort value");
    }

    void finish_sort(const Token& name, Sort s) {
        SortId existing = prog_.sig.find_sort(s.name);
        if (existing >= 0) {
            const Sort& old = prog_.sig.sort(existing);
            if (old.values != s.values || old.numeric != s.numeric)
                fail_at(name, "conflicting redeclaration of sort '" + s.name + "'");
            return; // identical redeclaration across files is fine
        }
        SortId id = static_cast<SortId>(prog_.sig.sorts.size());
        if (!s.numeric) {
            for (const Value& v : s.values) {
                auto it = prog_.sig.constant_sorts.find(v.sym);
                if (it != prog_.sig.constant_sorts.end())
                    fail_at(name, "constant '" + v.str() + "' already belongs to sort '" +
                                      prog_.sig.sort(it->second).name + "'");
                prog_.sig.constant_sorts.emplace(v.sym, id);
            }
        }
        prog_.sig.sort_ids.emplace(s.name, id);
        prog_.sig.sorts.push_back(std::move(s));
    }

    void pred_decl(bool defined) {
        take();
        Token name = expect(Tok::Ident, "predicate name");
        if (is_keyword(name.text)) fail_at(name, "'" + name.text + "' is reserved");
        PredDecl d;
        d.name = name.text;
        d.defined = defined;
        if (at(Tok::LParen)) {
            take();
            while (!at(Tok::RParen)) {
                if (!d.arg_sorts.empty()) expect(Tok::Comma, "','");
                Token sn = expect(Tok::Ident, "sort name");
                SortId sid = prog_.sig.find_sort(sn.text);
                if (sid < 0) fail_at(sn, "unknown sort '" + sn.text + "'");
                d.arg_sorts.push_back(sid);
            }
            take();
        }
        expect(Tok::Dot, "'.'");
        PredId existing = prog_.sig.find_pred(d.name);
        if (existing >= 0) {
            const PredDecl& old = prog_.sig.pred(existing);
            if (old.arg_sorts != d.arg_sorts || old.defined != d.defined)
                fail_at(name, "conflicting redeclaration of predicate '" + d.name + "'");
            return;
        }
        prog_.sig.pred_ids.emplace(d.name, static_cast<PredId>(prog_.sig.preds.size()));
        prog_.sig.preds.push_back(std::move(d));
    }

    void rule_decl() {
        Token kw = take();
        if (facts_only_) fail_at(kw, "rules are not allowed in a facts file");
        Rule r;
        r.line = kw.line;
        Token hn = expect(Tok::Ident, "head atom");
        PredId hp = prog_.sig.find_pred(hn.text);
        if (hp < 0) fail_at(hn, "unknown predicate '" + hn.text + "'");
        if (!prog_.sig.pred(hp).defined)
            fail_at(hn, "rule head must use a defined predicate");
        r.head_pred = hp;
        r.head_args = atom_args(hp, hn);
        expect(Tok::LArrow, "'<-'");
        r.body = formula();
        expect(Tok::Dot, "'.'");
        infer_rule(r, hn);
        prog_.rules.push_back(std::move(r));
    }

    void fact_decl() {
        Token fn = expect(Tok::Ident, "fact");
        PredId p = prog_.sig.find_pred(fn.text);
        if (p < 0) fail_at(fn, "unknown predicate '" + fn.text + "'");
        const PredDecl& d = prog_.sig.pred(p);
        Fact f;
        f.pred = p;
        f.line = fn.line;
        if (at(Tok::LParen)) {
            take();
            while (!at(Tok::RParen)) {
                if (!f.args.empty()) expect(Tok::Comma, "','");
                f.args.push_back(ground_value());
            }
            take();
        }
        expect(Tok::Dot, "'.'");
        if (f.args.size() != d.arg_sorts.size())
            fail_at(fn, "arity mismatch for '" + d.name + "'");
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            const Sort& s = prog_.sig.sort(d.arg_sorts[i]);
            if (!s.contains(f.args[i]))
                fail_at(fn, "value '" + f.args[i].str() + "' is not in sort '" + s.name + "'");
        }
        prog_.facts.push_back(std::move(f));
    }

    Rational signed_int() {
        Rational r = signed_rational();
        if (!is_integer(r)) fail("expected an integer");
        return r;
    }
    Rational signed_rational() {
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        Token n = expect(Tok::Number, "a number");
        return neg ? Rational(-n.number) : n.number;
    }

    Value ground_value() {
        if (at(Tok::Ident)) {
            Token v = take();
            Value val = Value::symbol(v.text);
            if (!prog_.sig.constant_sorts.count(val.sym))
                fail_at(v, "unknown constant '" + v.text + "'");
            return val;
        }
        return Value::number(signed_rational());
    }

    // ---- terms -----------------------------------------------------------

    TermPtr term() { return term_add(); }

    TermPtr term_add() {
        TermPtr t = term_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            char op = at(Tok::Plus) ? '+' : '-';
            take();
            t = Term::make_arith(op, t, term_mul());
        }
        return t;
    }
    TermPtr term_mul() {
        TermPtr t = term_primary();
        while (at(Tok::Star)) {
            take();
            t = Term::make_arith('*', t, term_primary());
        }
        return t;
    }
    TermPtr term_primary() {
        if (at(Tok::Minus)) {
            take();
            TermPtr t = term_primary();
            return Term::make_arith('-', Term::make_const(Value::number(0L)), t);
        }
        if (at(Tok::Number)) return Term::make_const(Value::number(take().number));
        if (at(Tok::LParen)) {
            take();
            TermPtr t = term();
            expect(Tok::RParen, "')'");
            return t;
        }
        Token id = expect(Tok::Ident, "a term");
        if (is_keyword(id.text)) fail_at(id, "'" + id.text + "' cannot be used in a term");
        return resolve_ident(id.text);
    }

    // Binder-scoped names are variables; declared domain constants are
    // values; anything else is a rule-level free variable.
    TermPtr resolve_ident(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
            if (it->count(name)) return Term::make_var(name);
        Value v = Value::symbol(name);
        if (prog_.sig.constant_sorts.count(v.sym)) return Term::make_const(v);
        return Term::make_var(name);
    }

    std::vector<TermPtr> atom_args(PredId p, const Token& where) {
        std::vector<TermPtr> args;
        if (at(Tok::LParen)) {
            take();
            while (!at(Tok::RParen)) {
                if (!args.empty()) expect(Tok::Comma, "','");
                args.push_back(term());
            }
            take();
        }
        if (args.size() != prog_.sig.pred(p).arg_sorts.size())
            fail_at(where, "arity mismatch for '" + prog_.sig.pred(p).name + "'");
        return args;
    }

    // ---- formulas --------------------------------------------------------
    //
    // Precedence, loosest first: <-  |  &  (not / quantifiers)  primary.
    // "f <- g" abbreviates "f | not g".

    FormulaPtr formula() {
        FormulaPtr f = formula_or();
        while (at(Tok::LArrow)) {
            take();
            f = Formula::make_or(f, Formula::make_not(formula_or()));
        }
        return f;
    }
    FormulaPtr formula_or() {
        FormulaPtr f = formula_and();
        while (at(Tok::Pipe)) {
            take();
            f = Formula::make_or(f, formula_and());
        }
        return f;
    }
    FormulaPtr formula_and() {
        FormulaPtr f = formula_unary();
        while (at(Tok::Amp)) {
            take();
            f = Formula::make_and(f, formula_unary());
        }
        return f;
    }
    FormulaPtr formula_unary() {
        if (at_ident("not")) {
            take();
            return Formula::make_not(formula_unary());
        }
        if (at_ident("exists") || at_ident("forall")) {
            bool ex = cur().text == "exists";
            take();
            Token v = expect(Tok::Ident, "a variable");
            if (is_keyword(v.text)) fail_at(v, "'" + v.text + "' cannot be a variable");
            expect(Tok::Colon, "':'");
            scopes_.push_back({v.text});
            FormulaPtr body = formula();
            scopes_.pop_back();
            return Formula::make_quant(ex ? FormulaKind::Exists : FormulaKind::Forall,
                                       VarBind{v.text, -1}, body);
        }
        return formula_primary();
    }

    FormulaPtr formula_primary() {
        if (at_ident("true")) {
            take();
            return Formula::make_bool(true);
        }
        if (at_ident("false")) {
            take();
            return Formula::make_bool(false);
        }
        if (at(Tok::LParen)) {
            take();
            FormulaPtr f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Ident) && agg_names().count(cur().text)) return agg_atom();
        // an atom when the identifier is a known predicate applied to '(' or
        // standing alone without a comparison; otherwise a term comparison
        if (at(Tok::Ident) && !is_keyword(cur().text)) {
            PredId p = prog_.sig.find_pred(cur().text);
            if (p >= 0 && (ahead().kind == Tok::LParen || !starts_cmp(ahead().kind))) {
                Token name = take();
                return Formula::make_atom(p, atom_args(p, name));
            }
        }
        TermPtr a = term();
        CmpOp op = cmp_op();
        TermPtr b = term();
        return Formula::make_cmp(op, a, b);
    }

    static bool starts_cmp(Tok k) {
        return k == Tok::Eq || k == Tok::Neq || k == Tok::Lt || k == Tok::Leq || k == Tok::Gt ||
               k == Tok::Geq;
    }
    CmpOp cmp_op() {
        switch (cur().kind) {
        case Tok::Eq: take(); return CmpOp::Eq;
        case Tok::Neq: take(); return CmpOp::Neq;
        case Tok::Lt: take(); return CmpOp::Lt;
        case Tok::Leq: take(); return CmpOp::Leq;
        case Tok::Gt: take(); return CmpOp::Gt;
        case Tok::Geq: take(); return CmpOp::Geq;
        default: fail("expected a comparison operator");
        }
    }

    FormulaPtr agg_atom() {
        Token name = take();
        AggKind kind = agg_names().at(name.text);
        expect(Tok::LParen, "'('");
        expect(Tok::LBrace, "'{'");
        std::vector<VarBind> bound;
        std::set<std::string> binder;
        for (;;) {
            Token v = expect(Tok::Ident, "a set-expression variable");
            if (is_keyword(v.text)) fail_at(v, "'" + v.text + "' cannot be a variable");
            if (!binder.insert(v.text).second) fail_at(v, "duplicate set-expression variable");
            bound.push_back({v.text, -1});
            if (!at(Tok::Comma)) break;
            take();
        }
        expect(Tok::Colon, "':'");
        scopes_.push_back(binder);
        FormulaPtr cond = formula();
        scopes_.pop_back();
        expect(Tok::RBrace, "'}'");
        expect(Tok::Comma, "','");
        TermPtr result = term();
        expect(Tok::RParen, "')'");
        return Formula::make_agg(kind, std::move(bound), cond, result);
    }

    // ---- sort inference ----------------------------------------------------

    struct Slot {
        SortId sort = -1;
        bool needs_numeric = false;
        Token first; // position of the first occurrence
    };
    using ScopeSlots = std::map<std::string, Slot*>;

    void infer_rule(Rule& r, const Token& where) {
        std::map<std::string, Slot> rule_slots;
        std::vector<ScopeSlots> stack;
        std::function<void(const TermPtr&)> mark_numeric_impl;
        auto mark_numeric_fwd = [&](const TermPtr& t) { mark_numeric_impl(t); };
        auto slot_of = [&](const std::string& name) -> Slot* {
            for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                auto f = it->find(name);
                if (f != it->end()) return f->second;
            }
            auto [it, inserted] = rule_slots.try_emplace(name);
            if (inserted) it->second.first = where;
            return &it->second;
        };

        auto constrain_var = [&](const std::string& name, SortId s) {
            Slot* sl = slot_of(name);
            if (sl->sort < 0) {
                sl->sort = s;
            } else if (sl->sort != s) {
                fail_at(where, "variable '" + name + "' used with conflicting sorts '" +
                                   prog_.sig.sort(sl->sort).name + "' and '" +
                                   prog_.sig.sort(s).name + "'");
            }
        };

        // collect sort constraints from atom argument positions
        std::function<void(const TermPtr&, SortId)> constrain_term =
            [&](const TermPtr& t, SortId s) {
                switch (t->kind) {
                case TermKind::Var:
                    if (s >= 0) constrain_var(t->var, s);
                    break;
                case TermKind::Const:
                    if (s >= 0 && !prog_.sig.sort(s).contains(t->value))
                        fail_at(where, "value '" + t->value.str() + "' is not in sort '" +
                                           prog_.sig.sort(s).name + "'");
                    break;
                case TermKind::Arith:
                    mark_numeric_fwd(t);
                    break;
                }
            };

        // a term used as a number: its variables need numeric sorts
        mark_numeric_impl = [&](const TermPtr& t) {
            switch (t->kind) {
            case TermKind::Var: slot_of(t->var)->needs_numeric = true; break;
            case TermKind::Const:
                if (!t->value.is_number())
                    fail_at(where, "constant '" + t->value.str() + "' used where a number is needed");
                break;
            case TermKind::Arith:
                mark_numeric_impl(t->lhs);
                mark_numeric_impl(t->rhs);
                break;
            }
        };
        auto& mark_numeric = mark_numeric_impl;

        std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
            auto* mf = const_cast<Formula*>(f.get());
            switch (f->kind) {
            case FormulaKind::Atom: {
                const PredDecl& d = prog_.sig.pred(f->pred);
                for (std::size_t i = 0; i < f->args.size(); ++i)
                    constrain_term(f->args[i], d.arg_sorts[i]);
                break;
            }
            case FormulaKind::AggAtom: {
                ScopeSlots scope;
                std::vector<Slot> local(f->bound.size());
                for (std::size_t i = 0; i < f->bound.size(); ++i) {
                    local[i].first = where;
                    scope[f->bound[i].name] = &local[i];
                }
                stack.push_back(scope);
                walk(f->cond);
                stack.pop_back();
                for (std::size_t i = 0; i < f->bound.size(); ++i) {
                    if (local[i].sort < 0)
                        fail_at(where, "cannot infer the sort of set-expression variable '" +
                                           f->bound[i].name + "'");
                    if (local[i].needs_numeric && !prog_.sig.sort(local[i].sort).numeric)
                        fail_at(where, "variable '" + f->bound[i].name +
                                           "' of symbolic sort used in arithmetic");
                    mf->bound[i].sort = local[i].sort;
                }
                mark_numeric(f->result);
                check_agg_sorts(*f, where);
                break;
            }
            case FormulaKind::Exists:
            case FormulaKind::Forall: {
                ScopeSlots scope;
                Slot local;
                local.first = where;
                scope[f->qvar.name] = &local;
                stack.push_back(scope);
                walk(f->child);
                stack.pop_back();
                if (local.sort < 0)
                    fail_at(where,
                            "cannot infer the sort of quantified variable '" + f->qvar.name + "'");
                if (local.needs_numeric && !prog_.sig.sort(local.sort).numeric)
                    fail_at(where,
                            "variable '" + f->qvar.name + "' of symbolic sort used in arithmetic");
                mf->qvar.sort = local.sort;
                break;
            }
            case FormulaKind::Not: walk(f->child); break;
            case FormulaKind::And:
            case FormulaKind::Or:
                walk(f->left);
                walk(f->right);
                break;
            case FormulaKind::Cmp:
                if (f->cmp_op != CmpOp::Eq && f->cmp_op != CmpOp::Neq) {
                    mark_numeric(f->t1);
                    mark_numeric(f->t2);
                } else {
                    constrain_term(f->t1, -1);
                    constrain_term(f->t2, -1);
                }
                // arithmetic inside either operand still needs numbers
                if (f->t1->kind == TermKind::Arith) mark_numeric(f->t1);
                if (f->t2->kind == TermKind::Arith) mark_numeric(f->t2);
                break;
            case FormulaKind::BoolConst:
            case FormulaKind::GroundAtom: break;
            }
        };

        // head constraints first, then the body
        const PredDecl& hd = prog_.sig.pred(r.head_pred);
        for (std::size_t i = 0; i < r.head_args.size(); ++i)
            constrain_term(r.head_args[i], hd.arg_sorts[i]);
        walk(r.body);

        for (auto& [name, slot] : rule_slots) {
            if (slot.sort < 0)
                fail_at(where, "cannot infer the sort of variable '" + name + "'");
            if (slot.needs_numeric && !prog_.sig.sort(slot.sort).numeric)
                fail_at(where, "variable '" + name + "' of symbolic sort '" +
                                   prog_.sig.sort(slot.sort).name + "' used in arithmetic");
            r.var_sorts.emplace(name, slot.sort);
        }
    }

    void check_agg_sorts(const Formula& f, const Token& where) {
        if (f.agg.base == AggBase::Count || f.agg.base == AggBase::Custom) return;
        SortId first = f.bound[0].sort;
        if (first >= 0 && !prog_.sig.sort(first).numeric)
            fail_at(where, "aggregate '" + f.agg.name() + "' needs a numeric first component, got sort '" +
                               prog_.sig.sort(first).name + "'");
    }

    Program& prog_;
    std::vector<Diagnostic>& diags_;
    bool facts_only_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::set<std::string>> scopes_;
};

} // namespace

ParseResult parse_program(const std::string& text) {
    ParseResult res;
    Program prog;
    Parser p(prog, text, res.diagnostics, /*facts_only=*/false);
    p.run();
    if (res.diagnostics.empty()) res.program = std::move(prog);
    return res;
}

bool parse_facts_into(Program& program, const std::string& text,
                      std::vector<Diagnostic>& diagnostics) {
    std::size_t before = diagnostics.size();
    Parser p(program, text, diagnostics, /*facts_only=*/true);
    p.run();
    return diagnostics.size() == before;
}

} // namespace aggrfix
