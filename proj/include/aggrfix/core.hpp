#ifndef AGGRFIX_CORE_HPP
#define AGGRFIX_CORE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace aggrfix {

// All numeric values are exact rationals; no floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& s); // "p/q" or "p"

// ---------------------------------------------------------------------------
// Symbols: process-wide interner for symbolic domain constants.
// ---------------------------------------------------------------------------
class Symbols {
public:
    static std::int32_t intern(const std::string& name);
    static const std::string& name(std::int32_t id);
};

// ---------------------------------------------------------------------------
// Value: a domain element, either a symbolic constant or an exact rational.
// ---------------------------------------------------------------------------
struct Value {
    std::int32_t sym = -1; // >= 0: symbol id; -1: numeric
    Rational num;

    Value() = default;
    static Value symbol(const std::string& name) {
        Value v;
        v.sym = Symbols::intern(name);
        return v;
    }
    static Value number(Rational r) {
        Value v;
        v.num = std::move(r);
        return v;
    }
    static Value number(long n) { return number(Rational(n)); }

    bool is_symbol() const { return sym >= 0; }
    bool is_number() const { return sym < 0; }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.sym != b.sym) return false;
        return a.is_symbol() || a.num == b.num;
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    // Symbols sort before numbers; symbols by interning id, numbers by value.
    friend bool operator<(const Value& a, const Value& b) {
        if (a.is_symbol() != b.is_symbol()) return a.is_symbol();
        if (a.is_symbol()) return a.sym < b.sym;
        return a.num < b.num;
    }

    std::string str() const { return is_symbol() ? Symbols::name(sym) : to_string(num); }
};

using Tuple = std::vector<Value>;
using TupleSet = std::set<Tuple>;

// Pair (certain, possible) of tuple sets with certain a subset of possible.
struct ThreeValuedSet {
    TupleSet certain;
    TupleSet possible;

    bool exact() const { return certain == possible; }
    bool consistent() const;
};

// ---------------------------------------------------------------------------
// Three-valued truth: F < U < T in the truth order; U below F and T in the
// precision order.
// ---------------------------------------------------------------------------
enum class Tv3 : unsigned char { False = 0, Undef = 1, True = 2 };

inline Tv3 tv_of(bool b) { return b ? Tv3::True : Tv3::False; }
inline Tv3 tv_from_pair(bool lo, bool hi) {
    return lo ? Tv3::True : (hi ? Tv3::Undef : Tv3::False);
}
inline bool tv_lower(Tv3 v) { return v == Tv3::True; }
inline bool tv_upper(Tv3 v) { return v != Tv3::False; }

inline Tv3 tv_and(Tv3 a, Tv3 b) { return a < b ? a : b; }
inline Tv3 tv_or(Tv3 a, Tv3 b) { return a < b ? b : a; }
inline Tv3 tv_not(Tv3 a) {
    switch (a) {
    case Tv3::False: return Tv3::True;
    case Tv3::True: return Tv3::False;
    default: return Tv3::Undef;
    }
}
// a at most as precise as b
inline bool tv_leq_p(Tv3 a, Tv3 b) { return a == Tv3::Undef || a == b; }

const char* tv_name(Tv3 v); // "F" | "U" | "T"

// Enumeration budgets. Exceeding one raises CapacityError.
struct EvalCaps {
    std::uint64_t max_interval = std::uint64_t(1) << 16; // interval members
    std::uint64_t max_subsets = std::uint64_t(1) << 20;  // subset candidates
    std::uint64_t max_atoms = 24;                        // model enumeration
    std::uint64_t denominator_limit = 1000000;           // scaled-integer path
};

} // namespace aggrfix

#endif
