#include "support/gen.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace aggrfix::testgen {

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* s = std::getenv("AGGRFIX_SEED");
    if (!s || !*s) return fallback;
    return std::strtoull(s, nullptr, 10);
}

Instance load(const std::string& text, const AggregateRegistry* reg) {
    ParseResult pr = parse_program(text);
    if (!pr.ok()) {
        std::string msg = "test program failed to parse:";
        for (const Diagnostic& d : pr.diagnostics) msg += "\n  " + d.str();
        msg += "\n" + text;
        throw UserError(msg);
    }
    Instance inst;
    inst.prog = std::make_unique<Program>(std::move(*pr.program));
    inst.d = std::make_unique<Structure>(*inst.prog, reg);
    inst.gp = instantiate(*inst.prog, *inst.d, inst.caps);
    return inst;
}

// ---------------------------------------------------------------------------
// Canonical programs
// ---------------------------------------------------------------------------

std::string counting_loop_program() {
    return "sort s = {0, 1}.\n"
           "defined p(s).\n"
           "rule p(0) <- count({X : p(X)}, 1).\n";
}

std::string tautology_body_program() {
    return "sort s = {0, 1, 2, 3}.\n"
           "defined p(s).\n"
           "rule p(X) <- count_leq({Y : p(Y)}, 1) | count_geq({Y : p(Y)}, 2).\n";
}

std::string party_invitation_program() {
    return "sort person = {A, B}.\n"
           "sort nat = int(0..2).\n"
           "pred friend(person, person).\n"
           "pred thr(person, nat).\n"
           "defined accept(person).\n"
           "rule accept(X) <- thr(X, T) & count_geq({Y : friend(X, Y) & accept(Y)}, T).\n"
           "friend(A, B).\n"
           "friend(B, A).\n"
           "thr(A, 1).\n"
           "thr(B, 1).\n";
}

std::string flp_program() {
    return "sort person = {A, B}.\n"
           "defined p(person).\n"
           "defined r().\n"
           "rule r <- count_neq({X : p(X)}, 1).\n"
           "rule p(A) <- r.\n"
           "rule p(B) <- r.\n"
           "rule p(A) <- p(B).\n"
           "rule p(B) <- p(A).\n";
}

std::string flp_translated_program() {
    return "sort person = {A, B}.\n"
           "defined p(person).\n"
           "defined r().\n"
           "rule r <- not p(A) & not p(B).\n"
           "rule r <- p(A) & p(B).\n"
           "rule p(A) <- r.\n"
           "rule p(B) <- r.\n"
           "rule p(A) <- p(B).\n"
           "rule p(B) <- p(A).\n";
}

std::string company_control_program(
    const std::vector<std::tuple<std::string, std::string, std::string>>& shares) {
    std::set<std::string> companies;
    std::set<std::string> fractions{"0"};
    for (auto& [a, b, s] : shares) {
        companies.insert(a);
        companies.insert(b);
        fractions.insert(s);
    }
    std::ostringstream os;
    os << "sort c = {";
    bool first = true;
    for (auto& x : companies) {
        if (!first) os << ", ";
        os << x;
        first = false;
    }
    os << "}.\n";
    os << "sort s = {";
    first = true;
    for (auto& x : fractions) {
        if (!first) os << ", ";
        os << x;
        first = false;
    }
    os << "}.\n";
    os << "pred owns_stock(c, c, s).\n";
    os << "defined controls(c, c).\n";
    os << "rule controls(X, Y) <- sum_gt({S, Z : (X = Z | controls(X, Z)) & "
          "owns_stock(Z, Y, S)}, 1/2).\n";
    for (auto& [a, b, s] : shares) os << "owns_stock(" << a << ", " << b << ", " << s << ").\n";
    return os.str();
}

namespace {

std::string graph_program(const std::vector<std::string>& nodes,
                          const std::vector<GraphEdge>& edges, long wlo, long whi,
                          bool recursive) {
    std::ostringstream os;
    os << "sort n = {";
    for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? ", " : "") << nodes[i];
    os << "}.\n";
    os << "sort w = int(" << wlo << ".." << whi << ").\n";
    os << "pred edge(n, n, w).\n";
    os << "defined cp(n, n, w).\n";
    os << "defined sp(n, n, w).\n";
    os << "rule cp(X, Y, C) <- edge(X, Y, C).\n";
    os << "rule cp(X, Y, C1 + C2) <- " << (recursive ? "sp" : "cp")
       << "(X, Z, C1) & edge(Z, Y, C2).\n";
    os << "rule sp(X, Y, W) <- min({C : cp(X, Y, C)}, W).\n";
    for (const GraphEdge& e : edges)
        os << "edge(" << e.from << ", " << e.to << ", " << e.weight << ").\n";
    return os.str();
}

} // namespace

std::string shortest_path_v1(const std::vector<std::string>& nodes,
                             const std::vector<GraphEdge>& edges, long wlo, long whi) {
    return graph_program(nodes, edges, wlo, whi, false);
}

std::string shortest_path_v2(const std::vector<std::string>& nodes,
                             const std::vector<GraphEdge>& edges, long wlo, long whi) {
    return graph_program(nodes, edges, wlo, whi, true);
}

// ---------------------------------------------------------------------------
// Random programs
// ---------------------------------------------------------------------------

namespace {

struct GenCtx {
    Rng& rng;
    std::vector<std::string> sort_values; // of sort s
    std::vector<std::string> defined;     // unary defined predicates
    std::vector<std::string> predefined;  // unary pre-defined predicates
};

std::string rand_value(GenCtx& g) { return g.rng.pick(g.sort_values); }

std::string rand_atom(GenCtx& g, const std::vector<std::string>& preds, const std::string& var) {
    std::string p = g.rng.pick(preds);
    std::string arg = !var.empty() && g.rng.chance(60) ? var : rand_value(g);
    return p + "(" + arg + ")";
}

// condition over a binder variable
std::string rand_condition(GenCtx& g, const std::string& var, bool allow_not_defined) {
    std::string atom = rand_atom(g, g.defined, var);
    switch (g.rng.below(allow_not_defined ? 4 : 3)) {
    case 0: return atom;
    case 1: return atom + " & " + rand_atom(g, g.predefined, var);
    case 2: return atom + " | " + rand_atom(g, g.defined, var);
    default: return "not " + atom;
    }
}

const std::vector<std::string>& all_cmp_suffixes() {
    static const std::vector<std::string> s = {"", "_eq", "_neq", "_leq", "_geq", "_lt", "_gt"};
    return s;
}

std::string rand_agg_atom(GenCtx& g, bool bnd_compatible, bool allow_not_defined) {
    static const std::vector<std::string> bnd_bases = {"count", "sum", "prod"};
    static const std::vector<std::string> all_bases = {"count", "sum", "prod", "min", "max"};
    std::string base = g.rng.pick(bnd_compatible ? bnd_bases : all_bases);
    std::string name = base + g.rng.pick(all_cmp_suffixes());
    std::string bound = std::to_string(g.rng.range(0, 4));
    return name + "({Y : " + rand_condition(g, "Y", allow_not_defined) + "}, " + bound + ")";
}

std::string rand_literal(GenCtx& g, const std::string& var, bool allow_negation) {
    std::string a = g.rng.chance(75) ? rand_atom(g, g.defined, var) : rand_atom(g, g.predefined, var);
    if (allow_negation && g.rng.chance(35)) return "not " + a;
    return a;
}

std::string rand_body(GenCtx& g, int depth, bool bnd_compatible) {
    if (depth == 0 || g.rng.chance(40)) {
        if (g.rng.chance(45)) return rand_agg_atom(g, bnd_compatible, true);
        return rand_literal(g, "", true);
    }
    std::string l = rand_body(g, depth - 1, bnd_compatible);
    std::string r = rand_body(g, depth - 1, bnd_compatible);
    switch (g.rng.below(3)) {
    case 0: return "(" + l + " & " + r + ")";
    case 1: return "(" + l + " | " + r + ")";
    default: return "not (" + l + ")";
    }
}

std::string header(GenCtx& g, int values) {
    std::ostringstream os;
    os << "sort s = {";
    for (int v = 0; v < values; ++v) {
        os << (v ? ", " : "") << v;
        g.sort_values.push_back(std::to_string(v));
    }
    os << "}.\n";
    for (const std::string& p : g.predefined) os << "pred " << p << "(s).\n";
    for (const std::string& p : g.defined) os << "defined " << p << "(s).\n";
    // random extension of the pre-defined predicates
    for (const std::string& p : g.predefined)
        for (const std::string& v : g.sort_values)
            if (g.rng.chance(50)) os << p << "(" << v << ").\n";
    return os.str();
}

} // namespace

std::string random_mixed_program(Rng& rng, int max_atoms) {
    GenCtx g{rng, {}, {"p", "q"}, {"e"}};
    int values = std::max(2, std::min(max_atoms / 2, 4));
    std::ostringstream os;
    os << header(g, values);
    int nrules = rng.range(2, 5);
    for (int i = 0; i < nrules; ++i) {
        std::string head = rand_atom(g, g.defined, "");
        os << "rule " << head << " <- " << rand_body(g, rng.below(3), true) << ".\n";
    }
    return os.str();
}

std::string random_definite_program(Rng& rng) {
    GenCtx g{rng, {}, {"p", "q"}, {"e"}};
    std::ostringstream os;
    os << header(g, 3);
    int nrules = rng.range(2, 5);
    for (int i = 0; i < nrules; ++i) {
        std::string head = rand_atom(g, g.defined, "");
        // positive bodies: positive literals, monotone aggregates over
        // positive conditions, anti-monotone ones over negative conditions
        std::vector<std::string> parts;
        int nparts = rng.range(1, 3);
        for (int k = 0; k < nparts; ++k) {
            switch (rng.below(4)) {
            case 0: parts.push_back(rand_atom(g, g.defined, "")); break;
            case 1: parts.push_back(rand_atom(g, g.predefined, "")); break;
            case 2: {
                std::string kind = rng.chance(50) ? "count_geq" : "count_gt";
                parts.push_back(kind + "({Y : " + rand_atom(g, g.defined, "Y") + "}, " +
                                std::to_string(rng.range(0, 3)) + ")");
                break;
            }
            default: {
                std::string kind = rng.chance(50) ? "count_leq" : "count_lt";
                parts.push_back(kind + "({Y : not " + rand_atom(g, g.defined, "Y") + "}, " +
                                std::to_string(rng.range(1, 4)) + ")");
                break;
            }
            }
        }
        os << "rule " << head << " <- " << parts[0];
        for (std::size_t k = 1; k < parts.size(); ++k)
            os << (rng.chance(70) ? " & " : " | ") << parts[k];
        os << ".\n";
    }
    return os.str();
}

std::string random_stratified_program(Rng& rng) {
    GenCtx g{rng, {}, {}, {"e"}};
    // a1 below a2 below a3
    std::vector<std::vector<std::string>> levels = {{"a1"}, {"a2"}, {"a3"}};
    g.defined = {"a1", "a2", "a3"};
    std::ostringstream os;
    os << header(g, rng.range(2, 3));
    for (std::size_t lvl = 0; lvl < levels.size(); ++lvl) {
        int nrules = rng.range(1, 2);
        for (int i = 0; i < nrules; ++i) {
            std::string head = levels[lvl][0] + "(" + rand_value(g) + ")";
            std::vector<std::string> same_or_lower, strictly_lower;
            for (std::size_t j = 0; j <= lvl; ++j) same_or_lower.push_back(levels[j][0]);
            for (std::size_t j = 0; j < lvl; ++j) strictly_lower.push_back(levels[j][0]);
            std::vector<std::string> parts;
            int nparts = rng.range(1, 3);
            for (int k = 0; k < nparts; ++k) {
                int c = rng.below(4);
                if (c == 0) {
                    parts.push_back(rand_atom(g, same_or_lower, ""));
                } else if (c == 1) {
                    parts.push_back(rand_atom(g, g.predefined, ""));
                } else if (c == 2 && !strictly_lower.empty()) {
                    parts.push_back("not " + rand_atom(g, strictly_lower, ""));
                } else if (!strictly_lower.empty()) {
                    static const std::vector<std::string> bases = {"count", "sum", "prod"};
                    std::string name = rng.pick(bases) + rng.pick(all_cmp_suffixes());
                    parts.push_back(name + "({Y : " + rand_atom(g, strictly_lower, "Y") + "}, " +
                                    std::to_string(rng.range(0, 3)) + ")");
                } else {
                    parts.push_back(rand_atom(g, same_or_lower, ""));
                }
            }
            os << "rule " << head << " <- " << parts[0];
            for (std::size_t k = 1; k < parts.size(); ++k)
                os << (rng.chance(70) ? " & " : " | ") << parts[k];
            os << ".\n";
        }
    }
    return os.str();
}

std::string random_normal_program(Rng& rng) {
    GenCtx g{rng, {}, {"p", "q"}, {"e"}};
    std::ostringstream os;
    os << header(g, rng.range(2, 3));
    int nrules = rng.range(2, 5);
    for (int i = 0; i < nrules; ++i) {
        std::string head = rand_atom(g, g.defined, "");
        std::vector<std::string> parts;
        int nparts = rng.range(1, 3);
        for (int k = 0; k < nparts; ++k) {
            if (rng.chance(35))
                parts.push_back(rand_agg_atom(g, true, false));
            else
                parts.push_back(rand_literal(g, "", true));
        }
        os << "rule " << head << " <- " << parts[0];
        for (std::size_t k = 1; k < parts.size(); ++k) os << " & " << parts[k];
        os << ".\n";
    }
    return os.str();
}

std::string random_plain_program(Rng& rng) {
    GenCtx g{rng, {}, {"p", "q"}, {"e"}};
    std::ostringstream os;
    os << header(g, rng.range(2, 3));
    int nrules = rng.range(2, 6);
    for (int i = 0; i < nrules; ++i) {
        std::string head = rand_atom(g, g.defined, "");
        std::string l = rand_literal(g, "", true);
        std::string r = rand_literal(g, "", true);
        switch (rng.below(3)) {
        case 0: os << "rule " << head << " <- " << l << ".\n"; break;
        case 1: os << "rule " << head << " <- " << l << " & " << r << ".\n"; break;
        default: os << "rule " << head << " <- " << l << " | " << r << ".\n"; break;
        }
    }
    return os.str();
}

RandomGraph random_graph(Rng& rng, int max_nodes, long max_weight) {
    static const std::vector<std::string> names = {"a", "b", "c", "d", "f", "g"};
    RandomGraph g;
    int n = rng.range(2, max_nodes);
    for (int i = 0; i < n; ++i) g.nodes.push_back(names[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !rng.chance(40)) continue;
            g.edges.push_back({g.nodes[static_cast<std::size_t>(i)],
                               g.nodes[static_cast<std::size_t>(j)],
                               static_cast<long>(rng.range(0, static_cast<int>(max_weight)))});
        }
    return g;
}

ThreeValuedSet random_three_valued_set(Rng& rng, int max_width, bool negatives, bool fractions) {
    ThreeValuedSet s;
    int pool = rng.range(1, std::max(1, max_width));
    for (int i = 0; i < pool; ++i) {
        long num = rng.range(negatives ? -4 : 0, 5);
        long den = fractions && rng.chance(30) ? rng.range(2, 4) : 1;
        Tuple t{Value::number(Rational(num, den))};
        if (rng.chance(40)) s.certain.insert(t);
        if (rng.chance(70) || s.certain.count(t)) s.possible.insert(t);
    }
    for (const Tuple& t : s.certain) s.possible.insert(t);
    return s;
}

AggKind random_agg_kind(Rng& rng, bool bnd_compatible) {
    static const std::vector<AggBase> bnd_bases = {AggBase::Count, AggBase::Sum, AggBase::Prod};
    static const std::vector<AggBase> all_bases = {AggBase::Count, AggBase::Sum, AggBase::Prod,
                                                   AggBase::Min,   AggBase::Max, AggBase::Avg,
                                                   AggBase::Lb,    AggBase::Ub};
    AggKind k;
    k.base = rng.pick(bnd_compatible ? bnd_bases : all_bases);
    if (k.base != AggBase::Lb && k.base != AggBase::Ub && rng.chance(70)) {
        static const std::vector<CmpOp> ops = {CmpOp::Eq,  CmpOp::Neq, CmpOp::Leq,
                                               CmpOp::Geq, CmpOp::Lt,  CmpOp::Gt};
        k.cmp = rng.pick(ops);
    }
    return k;
}

} // namespace aggrfix::testgen
