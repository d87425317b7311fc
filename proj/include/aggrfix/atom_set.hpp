#ifndef AGGRFIX_ATOM_SET_HPP
#define AGGRFIX_ATOM_SET_HPP

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace aggrfix {

// Fixed-width bitset over a ground base of n atoms; the carrier of the
// powerset lattice. Immutable use after construction is the norm; mutation
// is confined to construction sites.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static AtomSet from_mask(std::size_t n, std::uint64_t mask) {
        assert(n <= 64);
        AtomSet s(n);
        if (n > 0) s.w_[0] = mask;
        return s;
    }
    std::uint64_t to_mask() const {
        assert(n_ <= 64);
        return w_.empty() ? 0 : w_[0];
    }

    std::size_t universe_size() const { return n_; }

    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i) { w_[i / 64] |= std::uint64_t(1) << (i % 64); }
    void reset(std::size_t i) { w_[i / 64] &= ~(std::uint64_t(1) << (i % 64)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool empty() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    AtomSet& operator|=(const AtomSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    AtomSet& operator&=(const AtomSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
    friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
    AtomSet minus(const AtomSet& o) const {
        AtomSet r = *this;
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
        return r;
    }
    AtomSet complement() const {
        AtomSet r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        r.trim();
        return r;
    }

    bool is_subset_of(const AtomSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    friend bool operator==(const AtomSet& a, const AtomSet& b) {
        return a.n_ == b.n_ && a.w_ == b.w_;
    }
    friend bool operator!=(const AtomSet& a, const AtomSet& b) { return !(a == b); }
    // Total order used for canonical listings: as an integer, atom 0 least
    // significant.
    friend bool operator<(const AtomSet& a, const AtomSet& b) {
        assert(a.n_ == b.n_);
        for (std::size_t i = a.w_.size(); i-- > 0;)
            if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t w = w_[wi];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                f(wi * 64 + bit);
                w &= w - 1;
            }
        }
    }
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ n_);
    }

private:
    void trim() {
        if (n_ % 64 != 0 && !w_.empty())
            w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct AtomSetHash {
    std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

} // namespace aggrfix

#endif
