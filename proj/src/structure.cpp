#include "aggrfix/structure.hpp"

#include "aggrfix/error.hpp"

namespace aggrfix {

Structure::Structure(const Program& prog, const AggregateRegistry* registry)
    : prog_(&prog), relations_(prog.sig.preds.size()), registry_(registry) {
    for (const Fact& f : prog.facts) {
        if (prog.sig.pred(f.pred).defined) continue; // defined facts act as rules
        relations_[static_cast<std::size_t>(f.pred)].insert(f.args);
    }
}

int AtomTable::add(PredId p, Tuple args, std::string name) {
    int id = static_cast<int>(atoms_.size());
    index_.emplace(std::make_pair(p, args), id);
    atoms_.push_back({p, std::move(args), std::move(name)});
    return id;
}

int AtomTable::find(PredId p, const Tuple& args) const {
    auto it = index_.find(std::make_pair(p, args));
    return it == index_.end() ? -1 : it->second;
}

namespace {

std::string atom_name(const Signature& sig, PredId p, const Tuple& args) {
    std::string n = sig.pred(p).name;
    if (!args.empty()) {
        n += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) n += ',';
            n += args[i].str();
        }
        n += ')';
    }
    return n;
}

void enumerate_tuples(const Signature& sig, const std::vector<SortId>& sorts, Tuple& acc,
                      const std::function<void(const Tuple&)>& f) {
    if (acc.size() == sorts.size()) {
        f(acc);
        return;
    }
    for (const Value& v : sig.sort(sorts[acc.size()]).values) {
        acc.push_back(v);
        enumerate_tuples(sig, sorts, acc, f);
        acc.pop_back();
    }
}

} // namespace

AtomTable ground_base(const Structure& d) {
    AtomTable table;
    const Signature& sig = d.sig();
    for (PredId p = 0; p < static_cast<PredId>(sig.preds.size()); ++p) {
        if (!sig.pred(p).defined) continue;
        Tuple acc;
        enumerate_tuples(sig, sig.pred(p).arg_sorts, acc, [&](const Tuple& t) {
            table.add(p, t, atom_name(sig, p, t));
        });
    }
    return table;
}

const Value* env_lookup(const Env& env, const std::string& name) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == name) return &it->second;
    return nullptr;
}

Value eval_term(const TermPtr& t, const Env& env) {
    switch (t->kind) {
    case TermKind::Const: return t->value;
    case TermKind::Var: {
        const Value* v = env_lookup(env, t->var);
        if (!v) throw InternalError("unbound variable '" + t->var + "' at evaluation time");
        return *v;
    }
    case TermKind::Arith: {
        Value a = eval_term(t->lhs, env);
        Value b = eval_term(t->rhs, env);
        if (!a.is_number() || !b.is_number())
            throw InternalError("arithmetic on a symbolic value");
        switch (t->op) {
        case '+': return Value::number(a.num + b.num);
        case '-': return Value::number(a.num - b.num);
        case '*': return Value::number(a.num * b.num);
        default: throw InternalError("unknown arithmetic operator");
        }
    }
    }
    throw InternalError("unreachable term kind");
}

} // namespace aggrfix
