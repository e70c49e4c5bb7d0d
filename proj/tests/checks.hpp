// Shared doctest assertions on series.
#pragma once

#include "doctest.h"

#include "qmod/series.hpp"

#include <gmpxx.h>
#include <map>

inline void check_equal(const qmod::PuiseuxSeries& a, const qmod::PuiseuxSeries& b, const qmod::Frac& T) {
    auto r = compare_to_order(a, b, T);
    INFO("first mismatch at q^" << r.exponent.str());
    CHECK(r.equal);
}

// Every term of s below T matches the brute-force map, and vice versa.
inline void check_against_box(const qmod::PuiseuxSeries& s, const std::map<qmod::Frac, mpq_class>& ref, std::int64_t T) {
    std::size_t seen = 0;
    for (const auto& [e, c] : s.terms()) {
        if (e >= qmod::Frac(T)) continue;
        auto it = ref.find(e);
        REQUIRE_MESSAGE(it != ref.end(), "unexpected term at q^" << e.str());
        CHECK(c.rational_value() == it->second);
        ++seen;
    }
    CHECK(seen == ref.size());
}
