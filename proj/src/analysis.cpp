#include "aggrfix/analysis.hpp"

#include <algorithm>
#include <functional>

namespace aggrfix {

namespace {

void free_vars_term(const TermPtr& t, const std::vector<std::string>& bound,
                    std::set<std::string>& out) {
    switch (t->kind) {
    case TermKind::Var:
        if (std::find(bound.begin(), bound.end(), t->var) == bound.end()) out.insert(t->var);
        break;
    case TermKind::Const: break;
    case TermKind::Arith:
        free_vars_term(t->lhs, bound, out);
        free_vars_term(t->rhs, bound, out);
        break;
    }
}

void free_vars_rec(const FormulaPtr& f, std::vector<std::string>& bound,
                   std::set<std::string>& out) {
    switch (f->kind) {
    case FormulaKind::Atom:
        for (const TermPtr& a : f->args) free_vars_term(a, bound, out);
        break;
    case FormulaKind::AggAtom: {
        std::size_t mark = bound.size();
        for (const VarBind& b : f->bound) bound.push_back(b.name);
        free_vars_rec(f->cond, bound, out);
        bound.resize(mark);
        free_vars_term(f->result, bound, out);
        break;
    }
    case FormulaKind::Not: free_vars_rec(f->child, bound, out); break;
    case FormulaKind::And:
    case FormulaKind::Or:
        free_vars_rec(f->left, bound, out);
        free_vars_rec(f->right, bound, out);
        break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        bound.push_back(f->qvar.name);
        free_vars_rec(f->child, bound, out);
        bound.pop_back();
        break;
    }
    case FormulaKind::Cmp:
        free_vars_term(f->t1, bound, out);
        free_vars_term(f->t2, bound, out);
        break;
    case FormulaKind::BoolConst:
    case FormulaKind::GroundAtom: break;
    }
}

NumRange binder_range(const Signature& sig, const Formula& agg) {
    SortId s = agg.bound.empty() ? -1 : agg.bound[0].sort;
    return s >= 0 ? range_of_sort(sig.sort(s)) : NumRange::unknown();
}

void count_rec(const Signature& sig, const FormulaPtr& f, PredId p, const AggregateRegistry* reg,
               bool odd, bool neutral, bool in_agg, OccurrenceCounts& out) {
    switch (f->kind) {
    case FormulaKind::Atom:
        if (f->pred == p) {
            if (neutral)
                ++out.neutral;
            else if (odd)
                ++out.negative;
            else
                ++out.positive;
            if (in_agg)
                ++out.in_aggregate;
            else
                ++(odd ? out.outside_negative : out.outside_positive);
        }
        break;
    case FormulaKind::AggAtom: {
        Mono m = monotonicity(f->agg, binder_range(sig, *f), reg).kind;
        bool child_neutral = neutral || m == Mono::Neither;
        bool child_odd = m == Mono::AntiMonotone ? !odd : odd;
        count_rec(sig, f->cond, p, reg, child_odd, child_neutral, true, out);
        break;
    }
    case FormulaKind::Not: count_rec(sig, f->child, p, reg, !odd, neutral, in_agg, out); break;
    case FormulaKind::And:
    case FormulaKind::Or:
        count_rec(sig, f->left, p, reg, odd, neutral, in_agg, out);
        count_rec(sig, f->right, p, reg, odd, neutral, in_agg, out);
        break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: count_rec(sig, f->child, p, reg, odd, neutral, in_agg, out); break;
    case FormulaKind::Cmp:
    case FormulaKind::BoolConst:
    case FormulaKind::GroundAtom: break;
    }
}

} // namespace

std::set<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    free_vars_rec(f, bound, out);
    return out;
}

OccurrenceCounts count_occurrences(const Signature& sig, const FormulaPtr& f, PredId p,
                                   const AggregateRegistry* reg) {
    OccurrenceCounts out;
    count_rec(sig, f, p, reg, false, false, false, out);
    return out;
}

Polarity polarity(const Signature& sig, const FormulaPtr& f, PredId p,
                  const AggregateRegistry* reg) {
    OccurrenceCounts c = count_occurrences(sig, f, p, reg);
    if (c.total() == 0) return Polarity::Absent;
    int kinds = (c.positive > 0) + (c.negative > 0) + (c.neutral > 0);
    if (kinds > 1) return Polarity::Mixed;
    if (c.positive > 0) return Polarity::Positive;
    if (c.negative > 0) return Polarity::Negative;
    return Polarity::Neutral;
}

bool is_positive_formula(const Signature& sig, const FormulaPtr& f, const std::set<PredId>& defined,
                         const AggregateRegistry* reg) {
    for (PredId p : defined) {
        OccurrenceCounts c = count_occurrences(sig, f, p, reg);
        if (c.negative > 0 || c.neutral > 0) return false;
    }
    return true;
}

bool is_positive_formula(const Signature& sig, const FormulaPtr& f, const AggregateRegistry* reg) {
    std::set<PredId> defined;
    for (PredId p = 0; p < static_cast<PredId>(sig.preds.size()); ++p)
        if (sig.pred(p).defined) defined.insert(p);
    return is_positive_formula(sig, f, defined, reg);
}

bool is_negative_formula(const Signature& sig, const FormulaPtr& f, const AggregateRegistry* reg) {
    for (PredId p = 0; p < static_cast<PredId>(sig.preds.size()); ++p) {
        if (!sig.pred(p).defined) continue;
        OccurrenceCounts c = count_occurrences(sig, f, p, reg);
        if (c.positive > 0 || c.neutral > 0) return false;
    }
    return true;
}

bool is_definite(const Program& prog, const AggregateRegistry* reg) {
    for (const Rule& r : prog.rules)
        if (!is_positive_formula(prog.sig, r.body, reg)) return false;
    return true;
}

int Stratification::max_level() const {
    int m = 1;
    for (auto& [_, l] : levels) m = std::max(m, l);
    return m;
}

std::string Stratification::describe_cycle(const Signature& sig) const {
    std::string out = "dependency cycle through a negation or aggregate:";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        out += i == 0 ? " " : " -> ";
        out += sig.pred(cycle[i]).name;
    }
    return out;
}

Stratification stratify(const Program& prog, const AggregateRegistry* reg) {
    const Signature& sig = prog.sig;
    std::vector<PredId> defined;
    for (PredId p = 0; p < static_cast<PredId>(sig.preds.size()); ++p)
        if (sig.pred(p).defined) defined.push_back(p);

    // weight-0 edge q -> p: q may share p's level; weight-1: q strictly below
    std::map<std::pair<PredId, PredId>, int> edges;
    for (const Rule& r : prog.rules) {
        for (PredId q : defined) {
            OccurrenceCounts c = count_occurrences(sig, r.body, q, reg);
            if (c.total() == 0) continue;
            bool strict = c.outside_negative > 0 || c.in_aggregate > 0;
            bool weak = c.outside_positive > 0;
            if (!strict && !weak) continue;
            auto key = std::make_pair(q, r.head_pred);
            int w = strict ? 1 : 0;
            auto it = edges.find(key);
            if (it == edges.end())
                edges[key] = w;
            else
                it->second = std::max(it->second, w);
        }
    }

    // SCCs by iterative Tarjan
    std::map<PredId, std::vector<std::pair<PredId, int>>> succ; // q -> (p, w)
    for (auto& [qp, w] : edges) succ[qp.first].push_back({qp.second, w});

    std::map<PredId, int> comp;
    {
        int next_index = 0, next_comp = 0;
        std::map<PredId, int> index, low;
        std::vector<PredId> stack;
        std::set<PredId> on_stack;
        std::function<void(PredId)> strongconnect = [&](PredId v) {
            index[v] = low[v] = next_index++;
            stack.push_back(v);
            on_stack.insert(v);
            for (auto& [w, _] : succ[v]) {
                if (!index.count(w)) {
                    strongconnect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack.count(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (low[v] == index[v]) {
                for (;;) {
                    PredId w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    comp[w] = next_comp;
                    if (w == v) break;
                }
                ++next_comp;
            }
        };
        for (PredId p : defined)
            if (!index.count(p)) strongconnect(p);
    }

    Stratification out;
    // a strict edge inside a component is a failure; report the cycle
    for (auto& [qp, w] : edges) {
        auto [q, p] = qp;
        if (w == 1 && comp[q] == comp[p]) {
            // path p ~> q within the component, then the strict edge q -> p
            std::map<PredId, PredId> parent;
            std::vector<PredId> frontier{p};
            std::set<PredId> seen{p};
            while (!frontier.empty()) {
                std::vector<PredId> next;
                for (PredId u : frontier)
                    for (auto& [v, _] : succ[u])
                        if (comp[v] == comp[p] && seen.insert(v).second) {
                            parent[v] = u;
                            next.push_back(v);
                        }
                frontier = std::move(next);
            }
            std::vector<PredId> path{q};
            for (PredId u = q; u != p && parent.count(u);) {
                u = parent[u];
                path.push_back(u);
            }
            std::reverse(path.begin(), path.end()); // p ... q
            path.push_back(p);                      // close the cycle
            out.cycle = std::move(path);
            return out;
        }
    }

    // minimal levels: least solution of level(p) >= level(q) + w with
    // level >= 1, by relaxation. No cycle carries positive weight here, so
    // this converges within |defined| rounds.
    std::map<PredId, int> level;
    for (PredId p : defined) level[p] = 1;
    for (std::size_t round = 0; round <= defined.size(); ++round) {
        bool changed = false;
        for (auto& [qp, w] : edges) {
            int want = level[qp.first] + w;
            if (level[qp.second] < want) {
                level[qp.second] = want;
                changed = true;
            }
        }
        if (!changed) break;
    }
    out.levels = std::move(level);
    return out;
}

} // namespace aggrfix
