#include "aggrfix/kernels.hpp"

#include "aggrfix/error.hpp"

#include <algorithm>
#include <exception>
#include <omp.h>

namespace aggrfix {

namespace {

// Exceptions (capacity errors from aggregate enumeration) must not unwind
// out of a parallel region; the first one is stashed and rethrown after.
class ExceptionGate {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
#pragma omp critical(aggrfix_exception_gate)
            if (!eptr_) eptr_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (eptr_) std::rethrow_exception(eptr_);
    }

private:
    std::exception_ptr eptr_;
};

std::vector<std::size_t> interval_free_atoms(const AtomSet& lower, const AtomSet& upper,
                                             const EvalCaps& caps) {
    std::vector<std::size_t> diff = upper.minus(lower).indices();
    if (diff.size() >= 63 || (std::uint64_t(1) << diff.size()) > caps.max_interval)
        throw CapacityError("operator interval spans " + std::to_string(diff.size()) +
                            " undetermined atoms, beyond the interval cap");
    return diff;
}

AtomSet interval_member(const AtomSet& lower, const std::vector<std::size_t>& diff,
                        std::uint64_t mask) {
    AtomSet z = lower;
    for (std::size_t b = 0; b < diff.size(); ++b)
        if ((mask >> b) & 1) z.set(diff[b]);
    return z;
}

} // namespace

AtomSet tp_step(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                const EvalCaps& caps, ExecMode mode) {
    const auto n = static_cast<std::size_t>(gp.atoms.size());
    AtomSet out(n);
    const auto rules = static_cast<std::int64_t>(gp.rules.size());

    if (mode == ExecMode::Serial) {
        for (std::int64_t r = 0; r < rules; ++r)
            if (eval2(d, gp.atoms, i, gp.rules[static_cast<std::size_t>(r)].body, caps))
                out.set(static_cast<std::size_t>(gp.rules[static_cast<std::size_t>(r)].head));
        return out;
    }

    ExceptionGate gate;
#pragma omp parallel
    {
        AtomSet local(n);
#pragma omp for schedule(static) nowait
        for (std::int64_t r = 0; r < rules; ++r) {
            gate.run([&] {
                if (eval2(d, gp.atoms, i, gp.rules[static_cast<std::size_t>(r)].body, caps))
                    local.set(static_cast<std::size_t>(gp.rules[static_cast<std::size_t>(r)].head));
            });
        }
#pragma omp critical(aggrfix_tp_merge)
        out |= local;
    }
    gate.rethrow();
    return out;
}

std::pair<AtomSet, AtomSet> phi_step(const GroundProgram& gp, const Structure& d, Family fam,
                                     const AtomSet& lower, const AtomSet& upper,
                                     const EvalCaps& caps, ExecMode mode) {
    const auto n = static_cast<std::size_t>(gp.atoms.size());
    const auto rules = static_cast<std::int64_t>(gp.rules.size());
    // per-atom join of body values; atoms without rules stay false
    std::vector<unsigned char> join(n, 0);

    if (mode == ExecMode::Serial) {
        for (std::int64_t r = 0; r < rules; ++r) {
            const GroundRule& rule = gp.rules[static_cast<std::size_t>(r)];
            Tv3 v = eval3(d, gp.atoms, fam, lower, upper, rule.body, caps);
            auto h = static_cast<std::size_t>(rule.head);
            join[h] = std::max(join[h], static_cast<unsigned char>(v));
        }
    } else {
        ExceptionGate gate;
#pragma omp parallel
        {
            std::vector<unsigned char> local(n, 0);
#pragma omp for schedule(static) nowait
            for (std::int64_t r = 0; r < rules; ++r) {
                gate.run([&] {
                    const GroundRule& rule = gp.rules[static_cast<std::size_t>(r)];
                    Tv3 v = eval3(d, gp.atoms, fam, lower, upper, rule.body, caps);
                    auto h = static_cast<std::size_t>(rule.head);
                    local[h] = std::max(local[h], static_cast<unsigned char>(v));
                });
            }
#pragma omp critical(aggrfix_phi_merge)
            for (std::size_t a = 0; a < n; ++a) join[a] = std::max(join[a], local[a]);
        }
        gate.rethrow();
    }

    AtomSet lo(n), hi(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (join[a] == static_cast<unsigned char>(Tv3::True)) lo.set(a);
        if (join[a] != static_cast<unsigned char>(Tv3::False)) hi.set(a);
    }
    return {lo, hi};
}

std::pair<AtomSet, AtomSet> tp_interval_fold(const GroundProgram& gp, const Structure& d,
                                             const AtomSet& lower, const AtomSet& upper,
                                             const EvalCaps& caps, ExecMode mode, TpMemo* memo) {
    std::vector<std::size_t> diff = interval_free_atoms(lower, upper, caps);
    const std::uint64_t total = std::uint64_t(1) << diff.size();

    std::vector<AtomSet> results(total);
    std::vector<std::uint64_t> missing;
    missing.reserve(total);
    for (std::uint64_t m = 0; m < total; ++m) {
        if (memo) {
            auto it = memo->find(interval_member(lower, diff, m));
            if (it != memo->end()) {
                results[m] = it->second;
                continue;
            }
        }
        missing.push_back(m);
    }

    const auto todo = static_cast<std::int64_t>(missing.size());
    if (mode == ExecMode::Serial) {
        for (std::int64_t k = 0; k < todo; ++k) {
            std::uint64_t m = missing[static_cast<std::size_t>(k)];
            results[m] = tp_step(gp, d, interval_member(lower, diff, m), caps, ExecMode::Serial);
        }
    } else {
        ExceptionGate gate;
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t k = 0; k < todo; ++k) {
            gate.run([&] {
                std::uint64_t m = missing[static_cast<std::size_t>(k)];
                results[m] =
                    tp_step(gp, d, interval_member(lower, diff, m), caps, ExecMode::Serial);
            });
        }
        gate.rethrow();
    }
    if (memo)
        for (std::int64_t k = 0; k < todo; ++k) {
            std::uint64_t m = missing[static_cast<std::size_t>(k)];
            memo->emplace(interval_member(lower, diff, m), results[m]);
        }

    AtomSet glb = results[0], lub = results[0];
    for (std::uint64_t m = 1; m < total; ++m) {
        glb &= results[m];
        lub |= results[m];
    }
    return {glb, lub};
}

std::vector<std::uint64_t> filter_masks(std::uint64_t count,
                                        const std::function<bool(std::uint64_t)>& pred,
                                        ExecMode mode) {
    std::vector<std::uint64_t> out;
    if (mode == ExecMode::Serial) {
        for (std::uint64_t m = 0; m < count; ++m)
            if (pred(m)) out.push_back(m);
        return out;
    }
    ExceptionGate gate;
    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(dynamic, 64) nowait
        for (std::int64_t m = 0; m < total; ++m) {
            gate.run([&] {
                if (pred(static_cast<std::uint64_t>(m))) local.push_back(static_cast<std::uint64_t>(m));
            });
        }
#pragma omp critical(aggrfix_filter_merge)
        out.insert(out.end(), local.begin(), local.end());
    }
    gate.rethrow();
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace aggrfix
