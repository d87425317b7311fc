#ifndef AGGRFIX_AFT_HPP
#define AGGRFIX_AFT_HPP

#include "aggrfix/atom_set.hpp"
#include "aggrfix/error.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

// Lattice fixpoint machinery over a finite complete lattice, generic in the
// lattice space. A space provides:
//
//   using Elem;
//   bool  leq(a, b);  bool equal(a, b);
//   Elem  glb(a, b);  Elem lub(a, b);
//   Elem  bot();      Elem top();
//   template <class F> void for_each_between(lo, hi, cap, F);  // all of [lo,hi]
//
// The main instance is the powerset of a ground base (PowersetSpace below);
// small table-driven lattices are used in tests.

namespace aggrfix::aft {

template <class Space>
using ElemOf = typename Space::Elem;

// Consistent pair (lower, upper) with lower <= upper: the interval of
// approximated elements. Exact when lower == upper.
template <class Elem>
struct Pair {
    Elem lower;
    Elem upper;

    friend bool operator==(const Pair& a, const Pair& b) {
        return a.lower == b.lower && a.upper == b.upper;
    }
};

template <class Space>
bool consistent(const Space& s, const Pair<ElemOf<Space>>& p) {
    return s.leq(p.lower, p.upper);
}

// (x,y) <=p (x',y')  iff  x <= x' and y' <= y. More precise pairs denote
// smaller intervals.
template <class Space>
bool leq_precision(const Space& s, const Pair<ElemOf<Space>>& a, const Pair<ElemOf<Space>>& b) {
    return s.leq(a.lower, b.lower) && s.leq(b.upper, a.upper);
}

// An operator on consistent pairs that extends a base operator O (agrees
// with it on exact pairs) and is monotone in the precision order. The
// application counter is cumulative and safe to bump from worker threads.
template <class Space>
class Approximator {
public:
    using Elem = ElemOf<Space>;
    using Fn = std::function<Pair<Elem>(const Pair<Elem>&)>;
    using BaseFn = std::function<Elem(const Elem&)>;

    Approximator(Fn fn, BaseFn base)
        : fn_(std::move(fn)), base_(std::move(base)),
          applications_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}
    explicit Approximator(Fn fn) : Approximator(std::move(fn), BaseFn{}) {}

    Pair<Elem> apply(const Pair<Elem>& p) const {
        applications_->fetch_add(1, std::memory_order_relaxed);
        return fn_(p);
    }
    Elem lower(const Elem& x, const Elem& y) const { return apply({x, y}).lower; }
    Elem upper(const Elem& x, const Elem& y) const { return apply({x, y}).upper; }

    // The extended operator O, recovered from exact pairs when no dedicated
    // implementation was supplied.
    Elem base(const Elem& x) const {
        if (base_) return base_(x);
        return fn_({x, x}).lower;
    }
    bool has_base() const { return static_cast<bool>(base_); }

    std::uint64_t applications() const { return applications_->load(std::memory_order_relaxed); }
    void reset_applications() const { applications_->store(0, std::memory_order_relaxed); }

private:
    Fn fn_;
    BaseFn base_;
    std::shared_ptr<std::atomic<std::uint64_t>> applications_;
};

// ---------------------------------------------------------------------------
// Least fixpoint of a monotone operator above `start`, by iterated powers.
// The lattice is finite, so the increasing chain terminates. A
// non-increasing step means the operator was not monotone above `start`.
// ---------------------------------------------------------------------------
template <class Space, class Op>
ElemOf<Space> lfp_monotone(const Space& s, Op&& op, ElemOf<Space> start) {
    ElemOf<Space> x = std::move(start);
    ElemOf<Space> next = op(x);
    if (!s.leq(x, next))
        throw MonotonicityError("lfp iteration not increasing from start");
    while (!s.equal(next, x)) {
        ElemOf<Space> after = op(next);
        if (!s.leq(next, after))
            throw MonotonicityError("lfp iterate chain not increasing");
        x = std::move(next);
        next = std::move(after);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Kripke-Kleene fixpoint: precision-least fixpoint of A, iterated from
// (bot, top), the precision-least consistent pair.
// ---------------------------------------------------------------------------
template <class Space>
Pair<ElemOf<Space>> kripke_kleene(const Space& s, const Approximator<Space>& a) {
    Pair<ElemOf<Space>> p{s.bot(), s.top()};
    for (;;) {
        Pair<ElemOf<Space>> q = a.apply(p);
        if (!consistent(s, q))
            throw MonotonicityError("approximator left the consistent pairs");
        if (!leq_precision(s, p, q))
            throw MonotonicityError("approximator chain not precision-increasing");
        if (q == p) return p;
        p = std::move(q);
    }
}

namespace detail {

// lfp of A^1(.,b) from bot, requiring internality in [bot, b].
template <class Space>
std::optional<ElemOf<Space>> lower_lfp(const Space& s, const Approximator<Space>& a,
                                       const ElemOf<Space>& b) {
    ElemOf<Space> x = s.bot();
    for (;;) {
        ElemOf<Space> next = a.lower(x, b);
        if (!s.leq(next, b)) return std::nullopt; // not internal
        if (!s.leq(x, next))
            throw MonotonicityError("lower stable iteration not increasing");
        if (s.equal(next, x)) return x;
        x = std::move(next);
    }
}

// lfp of A^2(a0,.) on [a0, top], iterated from a0.
template <class Space>
std::optional<ElemOf<Space>> upper_lfp(const Space& s, const Approximator<Space>& a,
                                       const ElemOf<Space>& a0) {
    ElemOf<Space> y = a0;
    for (;;) {
        ElemOf<Space> next = a.upper(a0, y);
        if (!s.leq(a0, next)) return std::nullopt; // not internal
        if (!s.leq(y, next))
            throw MonotonicityError("upper stable iteration not increasing");
        if (s.equal(next, y)) return y;
        y = std::move(next);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Lower/upper stable operators.
//
//   lst(b) = glb { x in [bot,b] : A^1(x,b) <= x }
//   ust(a) = glb { x in [a,top] : A^2(a,x) <= x }
//
// When the projection is internal in its interval this is its least
// fixpoint and is computed by iteration; otherwise the pre-fixpoint set is
// enumerated, and an empty set yields top.
// ---------------------------------------------------------------------------
template <class Space>
ElemOf<Space> lower_stable(const Space& s, const Approximator<Space>& a, const ElemOf<Space>& b,
                           std::uint64_t enum_cap) {
    if (auto fp = detail::lower_lfp(s, a, b)) return *fp;
    std::optional<ElemOf<Space>> acc;
    s.for_each_between(s.bot(), b, enum_cap, [&](const ElemOf<Space>& x) {
        if (s.leq(a.lower(x, b), x)) acc = acc ? s.glb(*acc, x) : x;
    });
    return acc ? *acc : s.top();
}

template <class Space>
ElemOf<Space> upper_stable(const Space& s, const Approximator<Space>& a, const ElemOf<Space>& a0,
                           std::uint64_t enum_cap) {
    if (auto fp = detail::upper_lfp(s, a, a0)) return *fp;
    std::optional<ElemOf<Space>> acc;
    s.for_each_between(a0, s.top(), enum_cap, [&](const ElemOf<Space>& x) {
        if (s.leq(a.upper(a0, x), x)) acc = acc ? s.glb(*acc, x) : x;
    });
    return acc ? *acc : s.top();
}

// (a,b) is reliable when it is below its own revision in the precision
// order; prudent when a is below lst(b).
template <class Space>
bool is_reliable(const Space& s, const Approximator<Space>& a, const Pair<ElemOf<Space>>& p) {
    return leq_precision(s, p, a.apply(p));
}

template <class Space>
bool is_prudent(const Space& s, const Approximator<Space>& a, const Pair<ElemOf<Space>>& p,
                std::uint64_t enum_cap) {
    return s.leq(p.lower, lower_stable(s, a, p.upper, enum_cap));
}

// Stable revision: (a,b) -> (lst(b), ust(a)). Only defined on reliable and
// prudent pairs.
template <class Space>
Pair<ElemOf<Space>> stable_revision(const Space& s, const Approximator<Space>& a,
                                    const Pair<ElemOf<Space>>& p, std::uint64_t enum_cap) {
    if (!is_reliable(s, a, p)) throw DomainError("stable revision of a non-reliable pair");
    if (!is_prudent(s, a, p, enum_cap)) throw DomainError("stable revision of a non-prudent pair");
    return {lower_stable(s, a, p.upper, enum_cap), upper_stable(s, a, p.lower, enum_cap)};
}

template <class Elem>
struct WfResult {
    Pair<Elem> pair;
    bool exact = false;
};

// ---------------------------------------------------------------------------
// Well-founded fixpoint: least fixpoint of the stable revision operator
// above (bot, top), computed by the alternating schedule
//
//   I0 = bot,  Jn = lfp(A^2(In, .)),  In+1 = lfp(A^1(., Jn))
//
// until the lower estimate stabilizes (the upper estimate depends on the
// lower one only, so it stabilizes with it).
// ---------------------------------------------------------------------------
template <class Space>
WfResult<ElemOf<Space>> well_founded(const Space& s, const Approximator<Space>& a) {
    auto lower_of = [&](const ElemOf<Space>& j) {
        auto fp = detail::lower_lfp(s, a, j);
        if (!fp) throw MonotonicityError("lower projection not internal during WF");
        return *fp;
    };
    auto upper_of = [&](const ElemOf<Space>& i) {
        auto fp = detail::upper_lfp(s, a, i);
        if (!fp) throw MonotonicityError("upper projection not internal during WF");
        return *fp;
    };
    ElemOf<Space> i = s.bot();
    ElemOf<Space> j = upper_of(i);
    for (;;) {
        ElemOf<Space> i2 = lower_of(j);
        if (s.equal(i2, i)) break;
        i = std::move(i2);
        j = upper_of(i);
    }
    bool exact = s.equal(i, j);
    return {{std::move(i), std::move(j)}, exact};
}

// ---------------------------------------------------------------------------
// Exact stable fixpoints among the given candidates: x with O(x) = x and
// lfp(A^1(., x)) = x. Callers normally pass the fixpoints of O.
// ---------------------------------------------------------------------------
template <class Space>
std::vector<ElemOf<Space>> exact_stable_fixpoints(const Space& s, const Approximator<Space>& a,
                                                  const std::vector<ElemOf<Space>>& candidates) {
    std::vector<ElemOf<Space>> out;
    for (const auto& x : candidates) {
        if (!s.equal(a.base(x), x)) continue;
        auto fp = detail::lower_lfp(s, a, x);
        if (fp && s.equal(*fp, x)) out.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ultimate approximation of a base operator O:
//
//   U_O(x,y) = ( glb O([x,y]), lub O([x,y]) )
//
// computed by explicit interval enumeration, with results of O memoized
// across the run. The most precise approximator of O.
// ---------------------------------------------------------------------------
template <class Space, class Hash>
Approximator<Space> ultimate_of(const Space& s, std::function<ElemOf<Space>(const ElemOf<Space>&)> o,
                                std::uint64_t interval_cap, Hash) {
    using Elem = ElemOf<Space>;
    auto memo = std::make_shared<std::unordered_map<Elem, Elem, Hash>>();
    auto base = [o, memo](const Elem& x) {
        auto it = memo->find(x);
        if (it != memo->end()) return it->second;
        Elem r = o(x);
        memo->emplace(x, r);
        return r;
    };
    auto fn = [s, base, interval_cap](const Pair<Elem>& p) {
        std::optional<Elem> lo, hi;
        s.for_each_between(p.lower, p.upper, interval_cap, [&](const Elem& z) {
            Elem r = base(z);
            lo = lo ? s.glb(*lo, r) : r;
            hi = hi ? s.lub(*hi, r) : r;
        });
        return Pair<Elem>{std::move(*lo), std::move(*hi)};
    };
    return Approximator<Space>(fn, base);
}

// ---------------------------------------------------------------------------
// Precision comparison of two approximators of the same base operator on a
// sample of consistent pairs, with the induced fixpoint containments.
// ---------------------------------------------------------------------------
template <class Elem>
struct PrecisionEvidence {
    bool pointwise_leq = true;              // A(p) <=p B(p) on every sample
    std::optional<Pair<Elem>> counterexample;
    bool kk_leq = false;                    // KK(A) <=p KK(B)
    bool wf_leq = false;                    // WF(A) <=p WF(B)
    bool equal_on_samples = true;
};

template <class Space>
PrecisionEvidence<ElemOf<Space>> compare_precision(const Space& s, const Approximator<Space>& a,
                                                   const Approximator<Space>& b,
                                                   const std::vector<Pair<ElemOf<Space>>>& samples) {
    PrecisionEvidence<ElemOf<Space>> ev;
    for (const auto& p : samples) {
        auto ra = a.apply(p);
        auto rb = b.apply(p);
        if (!(ra == rb)) ev.equal_on_samples = false;
        if (!leq_precision(s, ra, rb)) {
            ev.pointwise_leq = false;
            if (!ev.counterexample) ev.counterexample = p;
        }
    }
    ev.kk_leq = leq_precision(s, kripke_kleene(s, a), kripke_kleene(s, b));
    ev.wf_leq = leq_precision(s, well_founded(s, a).pair, well_founded(s, b).pair);
    return ev;
}

// ---------------------------------------------------------------------------
// The powerset lattice over a ground base of n atoms.
// ---------------------------------------------------------------------------
struct PowersetSpace {
    using Elem = AtomSet;

    std::size_t n = 0;

    bool leq(const AtomSet& a, const AtomSet& b) const { return a.is_subset_of(b); }
    bool equal(const AtomSet& a, const AtomSet& b) const { return a == b; }
    AtomSet glb(const AtomSet& a, const AtomSet& b) const { return a & b; }
    AtomSet lub(const AtomSet& a, const AtomSet& b) const { return a | b; }
    AtomSet bot() const { return AtomSet(n); }
    AtomSet top() const { return AtomSet(n).complement(); }

    // Enumerates every set in [lo, hi] (lo plus any subset of hi \ lo),
    // in ascending subset-mask order over the difference bits.
    template <class F>
    void for_each_between(const AtomSet& lo, const AtomSet& hi, std::uint64_t cap, F&& f) const {
        std::vector<std::size_t> diff = hi.minus(lo).indices();
        if (diff.size() >= 63 || (std::uint64_t(1) << diff.size()) > cap)
            throw CapacityError("interval enumeration over " + std::to_string(diff.size()) +
                                " free atoms exceeds the configured cap");
        std::uint64_t total = std::uint64_t(1) << diff.size();
        for (std::uint64_t m = 0; m < total; ++m) {
            AtomSet z = lo;
            for (std::size_t b = 0; b < diff.size(); ++b)
                if ((m >> b) & 1) z.set(diff[b]);
            f(z);
        }
    }
};

inline Approximator<PowersetSpace> ultimate_of(const PowersetSpace& s,
                                               std::function<AtomSet(const AtomSet&)> o,
                                               std::uint64_t interval_cap) {
    return ultimate_of<PowersetSpace, AtomSetHash>(s, std::move(o), interval_cap, AtomSetHash{});
}

} // namespace aggrfix::aft

#endif
