#include "aggrfix/semantics.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <map>

namespace aggrfix {

const char* semantics_name(SemanticsKind k) {
    switch (k) {
    case SemanticsKind::Supported: return "supported";
    case SemanticsKind::Least: return "least";
    case SemanticsKind::Standard: return "standard";
    case SemanticsKind::KK: return "kk";
    case SemanticsKind::WF: return "wf";
    case SemanticsKind::Stable: return "stable";
    case SemanticsKind::UltimateKK: return "ultimate-kk";
    case SemanticsKind::UltimateWF: return "ultimate-wf";
    case SemanticsKind::UltimateStable: return "ultimate-stable";
    case SemanticsKind::Flp: return "flp";
    }
    return "?";
}

std::optional<SemanticsKind> semantics_from_name(const std::string& name) {
    static const std::map<std::string, SemanticsKind> table = {
        {"supported", SemanticsKind::Supported},
        {"least", SemanticsKind::Least},
        {"standard", SemanticsKind::Standard},
        {"kk", SemanticsKind::KK},
        {"wf", SemanticsKind::WF},
        {"stable", SemanticsKind::Stable},
        {"ultimate-kk", SemanticsKind::UltimateKK},
        {"ultimate-wf", SemanticsKind::UltimateWF},
        {"ultimate-stable", SemanticsKind::UltimateStable},
        {"flp", SemanticsKind::Flp},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool semantics_uses_family(SemanticsKind k) {
    return k == SemanticsKind::KK || k == SemanticsKind::WF || k == SemanticsKind::Stable;
}

bool semantics_is_model_set(SemanticsKind k) {
    return k == SemanticsKind::Supported || k == SemanticsKind::Stable ||
           k == SemanticsKind::UltimateStable || k == SemanticsKind::Flp;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

AtomSet tp(const GroundProgram& gp, const Structure& d, const AtomSet& i, const EvalCaps& caps,
           ExecMode mode) {
    return tp_step(gp, d, i, caps, mode);
}

aft::Pair<AtomSet> phi(const GroundProgram& gp, const Structure& d, Family fam,
                       const aft::Pair<AtomSet>& p, const EvalCaps& caps, ExecMode mode) {
    auto [lo, hi] = phi_step(gp, d, fam, p.lower, p.upper, caps, mode);
    return {lo, hi};
}

aft::Pair<AtomSet> ultimate_op(const GroundProgram& gp, const Structure& d,
                               const aft::Pair<AtomSet>& p, const EvalCaps& caps, ExecMode mode,
                               TpMemo* memo) {
    auto [lo, hi] = tp_interval_fold(gp, d, p.lower, p.upper, caps, mode, memo);
    return {lo, hi};
}

namespace {

void require_enumerable(const GroundProgram& gp, const EvalCaps& caps, const char* what) {
    auto n = static_cast<std::uint64_t>(gp.atoms.size());
    if (n > caps.max_atoms || n >= 63)
        throw CapacityError(std::string(what) + " needs enumeration over 2^" + std::to_string(n) +
                            " interpretations, beyond the atom cap");
}

std::vector<AtomSet> masks_to_sets(std::size_t n, const std::vector<std::uint64_t>& masks) {
    std::vector<AtomSet> out;
    out.reserve(masks.size());
    for (auto m : masks) out.push_back(AtomSet::from_mask(n, m));
    return out;
}

} // namespace

std::vector<AtomSet> supported_models(const GroundProgram& gp, const Structure& d,
                                      const EvalCaps& caps, ExecMode mode) {
    require_enumerable(gp, caps, "supported-model search");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    auto masks = filter_masks(std::uint64_t(1) << n,
                              [&](std::uint64_t m) {
                                  AtomSet i = AtomSet::from_mask(n, m);
                                  return tp_step(gp, d, i, caps, ExecMode::Serial) == i;
                              },
                              mode);
    return masks_to_sets(n, masks);
}

std::vector<AtomSet> models(const GroundProgram& gp, const Structure& d, const EvalCaps& caps,
                            ExecMode mode) {
    require_enumerable(gp, caps, "model search");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    auto masks = filter_masks(std::uint64_t(1) << n,
                              [&](std::uint64_t m) {
                                  AtomSet i = AtomSet::from_mask(n, m);
                                  return tp_step(gp, d, i, caps, ExecMode::Serial).is_subset_of(i);
                              },
                              mode);
    return masks_to_sets(n, masks);
}

AtomSet least_model_definite(const GroundProgram& gp, const Structure& d, const EvalCaps& caps,
                             ExecMode mode) {
    if (!is_definite(d.program(), d.registry()))
        throw DomainError("least-model semantics needs a definite program");
    aft::PowersetSpace space{static_cast<std::size_t>(gp.atoms.size())};
    return aft::lfp_monotone(
        space, [&](const AtomSet& x) { return tp_step(gp, d, x, caps, mode); }, space.bot());
}

AtomSet standard_model_stratified(const GroundProgram& gp, const Structure& d,
                                  const EvalCaps& caps, ExecMode mode) {
    Stratification strat = stratify(d.program(), d.registry());
    if (!strat.ok()) throw UserError("not stratified: " + strat.describe_cycle(d.sig()));

    aft::PowersetSpace space{static_cast<std::size_t>(gp.atoms.size())};
    // per-stratum ground programs, sharing the atom table
    std::map<int, GroundProgram> strata;
    for (const GroundRule& r : gp.rules) {
        PredId head = gp.atoms.at(r.head).pred;
        int level = strat.levels.at(head);
        auto [it, inserted] = strata.try_emplace(level);
        if (inserted) it->second.atoms = gp.atoms;
        it->second.rules.push_back(r);
    }
    AtomSet acc = space.bot();
    for (auto& [level, sub] : strata) {
        AtomSet layer = aft::lfp_monotone(
            space, [&](const AtomSet& x) { return tp_step(sub, d, acc | x, caps, mode); },
            space.bot());
        acc |= layer;
    }
    return acc;
}

aft::Approximator<aft::PowersetSpace> phi_approximator(const GroundProgram& gp, const Structure& d,
                                                       Family fam, const EvalCaps& caps,
                                                       ExecMode mode) {
    auto fn = [&gp, &d, fam, caps, mode](const aft::Pair<AtomSet>& p) {
        return phi(gp, d, fam, p, caps, mode);
    };
    auto base = [&gp, &d, caps, mode](const AtomSet& x) { return tp_step(gp, d, x, caps, mode); };
    return aft::Approximator<aft::PowersetSpace>(fn, base);
}

aft::Approximator<aft::PowersetSpace> ultimate_approximator(const GroundProgram& gp,
                                                            const Structure& d,
                                                            const EvalCaps& caps, ExecMode mode,
                                                            std::shared_ptr<TpMemo> memo) {
    auto fn = [&gp, &d, caps, mode, memo](const aft::Pair<AtomSet>& p) {
        return ultimate_op(gp, d, p, caps, mode, memo.get());
    };
    auto base = [&gp, &d, caps, mode, memo](const AtomSet& x) {
        if (memo) {
            auto it = memo->find(x);
            if (it != memo->end()) return it->second;
        }
        AtomSet r = tp_step(gp, d, x, caps, mode);
        if (memo) memo->emplace(x, r);
        return r;
    };
    return aft::Approximator<aft::PowersetSpace>(fn, base);
}

// ---------------------------------------------------------------------------
// FLP
// ---------------------------------------------------------------------------

namespace {

void flatten_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind == FormulaKind::And) {
        flatten_conjuncts(f->left, out);
        flatten_conjuncts(f->right, out);
        return;
    }
    out.push_back(f);
}

bool conjunct_holds(const Structure& d, const AtomTable& atoms, const AtomSet& i,
                    const FormulaPtr& c, const EvalCaps& caps) {
    switch (c->kind) {
    case FormulaKind::BoolConst: return c->bval;
    case FormulaKind::GroundAtom: return i.test(static_cast<std::size_t>(c->atom_index));
    case FormulaKind::Not:
        if (c->child->kind == FormulaKind::GroundAtom)
            return !i.test(static_cast<std::size_t>(c->child->atom_index));
        break;
    case FormulaKind::AggAtom: return eval2(d, atoms, i, c, caps);
    default: break;
    }
    throw DomainError("FLP reduct needs bodies that are conjunctions of "
                      "literals and aggregate atoms");
}

} // namespace

GroundProgram flp_reduct(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                         const EvalCaps& caps) {
    GroundProgram out;
    out.atoms = gp.atoms;
    out.truncation = gp.truncation;
    for (const GroundRule& r : gp.rules) {
        std::vector<FormulaPtr> conjuncts;
        flatten_conjuncts(r.body, conjuncts);
        bool keep = true;
        for (const FormulaPtr& c : conjuncts)
            if (!conjunct_holds(d, gp.atoms, i, c, caps)) {
                keep = false;
                break;
            }
        if (keep) out.rules.push_back(r);
    }
    return out;
}

bool flp_stable_check(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                      const EvalCaps& caps) {
    GroundProgram reduct = flp_reduct(gp, d, i, caps);
    if (!tp_step(reduct, d, i, caps, ExecMode::Serial).is_subset_of(i)) return false;
    // minimality: no proper subset of i models the reduct
    std::vector<std::size_t> bits = i.indices();
    if (bits.size() >= 63 || (std::uint64_t(1) << bits.size()) > caps.max_subsets)
        throw CapacityError("FLP minimality check exceeds the subset cap");
    auto n = static_cast<std::size_t>(gp.atoms.size());
    for (std::uint64_t m = 0; m + 1 < (std::uint64_t(1) << bits.size()); ++m) {
        AtomSet j(n);
        for (std::size_t b = 0; b < bits.size(); ++b)
            if ((m >> b) & 1) j.set(bits[b]);
        if (tp_step(reduct, d, j, caps, ExecMode::Serial).is_subset_of(j)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

namespace {

void check_bnd_supported(const GroundProgram& gp) {
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        switch (f->kind) {
        case FormulaKind::AggAtom:
            if ((f->agg.base != AggBase::Count && f->agg.base != AggBase::Sum &&
                 f->agg.base != AggBase::Prod) ||
                f->agg.subset_closed)
                throw DomainError("the bnd family covers count/sum/prod only; '" + f->agg.name() +
                                  "' is not supported");
            walk(f->cond);
            break;
        case FormulaKind::Not: walk(f->child); break;
        case FormulaKind::Exists:
        case FormulaKind::Forall: walk(f->child); break;
        case FormulaKind::And:
        case FormulaKind::Or:
            walk(f->left);
            walk(f->right);
            break;
        default: break;
        }
    };
    for (const GroundRule& r : gp.rules) walk(r.body);
}

std::vector<AtomSet> sort_canonical(std::vector<AtomSet> sets) {
    std::sort(sets.begin(), sets.end());
    return sets;
}

} // namespace

SemanticsResult run_semantics(const GroundProgram& gp, const Structure& d,
                              const SemanticsRequest& req) {
    SemanticsResult res;
    res.stats.truncation = gp.truncation;
    aft::PowersetSpace space{static_cast<std::size_t>(gp.atoms.size())};

    if (semantics_uses_family(req.kind) && req.family == Family::Bnd) check_bnd_supported(gp);

    auto finish_pair = [&](aft::Pair<AtomSet> p, std::uint64_t apps) {
        res.is_pair = true;
        res.lower = std::move(p.lower);
        res.upper = std::move(p.upper);
        res.exact = res.lower == res.upper;
        res.stats.op_applications = apps;
    };
    auto finish_models = [&](std::vector<AtomSet> ms, std::uint64_t apps) {
        res.is_models = true;
        res.models = sort_canonical(std::move(ms));
        res.stats.op_applications = apps;
    };

    switch (req.kind) {
    case SemanticsKind::Supported:
        finish_models(supported_models(gp, d, req.caps, req.mode), 0);
        break;
    case SemanticsKind::Least: {
        AtomSet m = least_model_definite(gp, d, req.caps, req.mode);
        finish_pair({m, m}, 0);
        break;
    }
    case SemanticsKind::Standard: {
        AtomSet m = standard_model_stratified(gp, d, req.caps, req.mode);
        finish_pair({m, m}, 0);
        break;
    }
    case SemanticsKind::KK: {
        auto a = phi_approximator(gp, d, req.family, req.caps, req.mode);
        auto p = aft::kripke_kleene(space, a);
        finish_pair(std::move(p), a.applications());
        break;
    }
    case SemanticsKind::WF: {
        auto a = phi_approximator(gp, d, req.family, req.caps, req.mode);
        auto wf = aft::well_founded(space, a);
        finish_pair(wf.pair, a.applications());
        res.exact = wf.exact;
        break;
    }
    case SemanticsKind::Stable: {
        auto a = phi_approximator(gp, d, req.family, req.caps, req.mode);
        auto candidates = supported_models(gp, d, req.caps, req.mode);
        auto stable = aft::exact_stable_fixpoints(space, a, candidates);
        finish_models(std::move(stable), a.applications());
        break;
    }
    case SemanticsKind::UltimateKK: {
        auto memo = std::make_shared<TpMemo>();
        auto a = ultimate_approximator(gp, d, req.caps, req.mode, memo);
        auto p = aft::kripke_kleene(space, a);
        finish_pair(std::move(p), a.applications());
        break;
    }
    case SemanticsKind::UltimateWF: {
        auto memo = std::make_shared<TpMemo>();
        auto a = ultimate_approximator(gp, d, req.caps, req.mode, memo);
        auto wf = aft::well_founded(space, a);
        finish_pair(wf.pair, a.applications());
        res.exact = wf.exact;
        break;
    }
    case SemanticsKind::UltimateStable: {
        auto memo = std::make_shared<TpMemo>();
        auto a = ultimate_approximator(gp, d, req.caps, req.mode, memo);
        auto candidates = supported_models(gp, d, req.caps, req.mode);
        auto stable = aft::exact_stable_fixpoints(space, a, candidates);
        finish_models(std::move(stable), a.applications());
        break;
    }
    case SemanticsKind::Flp: {
        require_enumerable(gp, req.caps, "FLP-stable search");
        auto n = static_cast<std::size_t>(gp.atoms.size());
        auto masks = filter_masks(std::uint64_t(1) << n,
                                  [&](std::uint64_t m) {
                                      return flp_stable_check(gp, d, AtomSet::from_mask(n, m),
                                                              req.caps);
                                  },
                                  req.mode);
        finish_models(masks_to_sets(n, masks), 0);
        break;
    }
    }
    return res;
}

} // namespace aggrfix
