#include "aggrfix/atom_set.hpp"

#include <doctest.h>

#include <random>

using namespace aggrfix;

TEST_CASE("basic set algebra") {
    AtomSet a(70), b(70);
    a.set(0);
    a.set(65);
    b.set(65);
    CHECK(a.count() == 2);
    CHECK(b.is_subset_of(a));
    CHECK(!a.is_subset_of(b));
    CHECK((a & b).count() == 1);
    CHECK((a | b) == a);
    CHECK(a.minus(b).test(0));
    CHECK(!a.minus(b).test(65));
}

TEST_CASE("complement respects the universe") {
    AtomSet a(70);
    AtomSet top = a.complement();
    CHECK(top.count() == 70);
    CHECK(a.is_subset_of(top));
    CHECK(top.complement() == a);
}

TEST_CASE("mask round-trip and ordering") {
    AtomSet x = AtomSet::from_mask(6, 0b101001);
    CHECK(x.to_mask() == 0b101001);
    CHECK(x.count() == 3);
    CHECK(AtomSet::from_mask(6, 3) < AtomSet::from_mask(6, 4));
    CHECK(!(AtomSet::from_mask(6, 4) < AtomSet::from_mask(6, 4)));
}

TEST_CASE("iteration lists indices ascending") {
    AtomSet a(130);
    a.set(3);
    a.set(64);
    a.set(129);
    auto idx = a.indices();
    REQUIRE(idx.size() == 3);
    CHECK(idx[0] == 3);
    CHECK(idx[1] == 64);
    CHECK(idx[2] == 129);
}

TEST_CASE("hash distinguishes random sets from their mutations") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 200; ++trial) {
        AtomSet a(90);
        for (int i = 0; i < 90; ++i)
            if (eng() & 1) a.set(static_cast<std::size_t>(i));
        AtomSet b = a;
        auto flip = static_cast<std::size_t>(eng() % 90);
        if (b.test(flip))
            b.reset(flip);
        else
            b.set(flip);
        CHECK(a.hash() != b.hash()); // FNV over words: single-bit flips differ
        CHECK(a == a);
        CHECK(a != b);
    }
}
