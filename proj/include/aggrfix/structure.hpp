#ifndef AGGRFIX_STRUCTURE_HPP
#define AGGRFIX_STRUCTURE_HPP

#include "aggrfix/aggregates.hpp"
#include "aggrfix/ast.hpp"

#include <map>
#include <string>
#include <vector>

namespace aggrfix {

// A finite structure: the program's signature with its sort domains, the
// extensional relations of the pre-defined predicates (from facts), and the
// aggregate registry in effect.
class Structure {
public:
    Structure(const Program& prog, const AggregateRegistry* registry = nullptr);

    const Program& program() const { return *prog_; }
    const Signature& sig() const { return prog_->sig; }
    const AggregateRegistry* registry() const { return registry_; }

    const TupleSet& relation(PredId p) const { return relations_[static_cast<std::size_t>(p)]; }
    bool holds(PredId p, const Tuple& t) const { return relation(p).count(t) > 0; }

private:
    const Program* prog_;
    std::vector<TupleSet> relations_;
    const AggregateRegistry* registry_;
};

// ---------------------------------------------------------------------------
// The ground base: every well-sorted atom of a defined predicate.
// ---------------------------------------------------------------------------
struct AtomInfo {
    PredId pred = -1;
    Tuple args;
    std::string name;
};

class AtomTable {
public:
    int add(PredId p, Tuple args, std::string name);
    int find(PredId p, const Tuple& args) const; // -1 when absent
    int size() const { return static_cast<int>(atoms_.size()); }
    const AtomInfo& at(int i) const { return atoms_[static_cast<std::size_t>(i)]; }

private:
    std::vector<AtomInfo> atoms_;
    std::map<std::pair<PredId, Tuple>, int> index_;
};

AtomTable ground_base(const Structure& d);

// Closed-term evaluation under an environment of variable bindings
// (innermost binding last).
using Env = std::vector<std::pair<std::string, Value>>;

const Value* env_lookup(const Env& env, const std::string& name);
Value eval_term(const TermPtr& t, const Env& env);

} // namespace aggrfix

#endif
