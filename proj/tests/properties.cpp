// Randomized and exhaustive property checks, runnable on their own.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "checks.hpp"
#include "oracles.hpp"

#include "qmod/nahm.hpp"
#include "qmod/products.hpp"
#include "qmod/transforms.hpp"

#include <random>

using namespace qmod;

namespace {

std::mt19937_64 rng(20240607);

Rational rand_rational() {
    std::int64_t p = static_cast<std::int64_t>(rng() % 19) - 9;
    std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 6);
    return Rational(p, q);
}

CycloElement rand_coeff(int n) {
    if (n == 1) return CycloElement::rational(rand_rational());
    CycloElement c = CycloElement::integer(0, n);
    for (int k = 0; k < n; ++k) c = c + CycloElement::rational(rand_rational(), n) * CycloElement::zeta(n, k);
    return c;
}

// A few terms with exponents in (1/2)Z, some negative; exact or truncated.
PuiseuxSeries rand_series(int n) {
    const Ring ring{n};
    const bool exact = rng() % 2 == 0;
    const Frac T = exact ? kExactOrder : Frac(static_cast<std::int64_t>(6 + rng() % 10));
    PuiseuxSeries s = PuiseuxSeries::zero(ring, T);
    const int terms = static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) {
        Frac e(static_cast<std::int64_t>(rng() % 16) - 3, 2);
        if (e >= T) continue;
        s = s + PuiseuxSeries::term(ring, e, rand_coeff(n));
    }
    return s;
}

Frac common_order(const PuiseuxSeries& x) { return x.is_exact() ? Frac(1000) : x.trunc(); }

}  // namespace

TEST_CASE("series ring axioms on random triples") {
    for (int trial = 0; trial < 500; ++trial) {
        const int n = trial % 3 == 0 ? 5 : 1;
        auto a = rand_series(n), b = rand_series(n), c = rand_series(n);
        INFO("trial " << trial);
        check_equal(a + b, b + a, common_order(a + b));
        check_equal((a + b) + c, a + (b + c), common_order(a + b + c));
        check_equal(a * b, b * a, common_order(a * b));
        auto abc = (a * b) * c;
        check_equal(abc, a * (b * c), common_order(abc));
        auto dist = a * (b + c);
        check_equal(dist, a * b + a * c, common_order(dist));
        check_equal(a * PuiseuxSeries::one(Ring{n}), a, common_order(a));
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("Pochhammer splicing") {
    // (a; q^s)_{m+n} = (a; q^s)_m (a q^{sm}; q^s)_n, and the infinite version
    for (int trial = 0; trial < 60; ++trial) {
        const Frac a(static_cast<std::int64_t>(rng() % 9) - 4, 1 + static_cast<std::int64_t>(rng() % 3));
        const Frac s(1 + static_cast<std::int64_t>(rng() % 3), 1 + static_cast<std::int64_t>(rng() % 2));
        const std::int64_t m = static_cast<std::int64_t>(rng() % 5), n = static_cast<std::int64_t>(rng() % 5);
        const std::optional<CycloElement> u =
            rng() % 2 ? std::optional<CycloElement>{} : std::optional<CycloElement>{CycloElement::zeta(3, 1)};
        INFO("a=" << a.str() << " step=" << s.str() << " m=" << m << " n=" << n);
        auto whole = pochhammer(a, u, s, m + n, kExactOrder);
        auto parts = pochhammer(a, u, s, m, kExactOrder) * pochhammer(a + s * Frac(m), u, s, n, kExactOrder);
        CHECK(whole == parts);
        if (a > Frac(0)) {
            const Frac T = 25;
            auto inf = pochhammer(a, u, s, std::nullopt, T);
            auto split = mul(pochhammer(a, u, s, m, kExactOrder), pochhammer(a + s * Frac(m), u, s, std::nullopt, T));
            check_equal(inf, split, T);
        }
    }
}

TEST_CASE("theta functions: sum form against triple product, 50 indices") {
    int count = 0;
    for (int m2 = 1; m2 <= 12 && count < 50; ++m2)
        for (int j2 = -m2; j2 <= 2 * m2 && count < 50; ++j2) {
            const ThetaIndex idx{Frac(j2, 2), Frac(m2, 2)};
            if (!(idx.j + idx.m).is_integer()) continue;
            INFO("j=" << idx.j.str() << " m=" << idx.m.str());
            check_equal(theta_g_sum(idx, 30), theta_g_product(idx, 30), 30);
            check_equal(theta_h_sum(idx, 30), theta_h_product(idx, 30), 30);
            ++count;
        }
    CHECK(count == 50);
}

TEST_CASE("theta function identities") {
    const Frac T = 30;
    for (int m2 = 1; m2 <= 8; ++m2)
        for (int j2 = -m2; j2 <= m2; ++j2) {
            const Frac j(j2, 2), m(m2, 2);
            if (!(j + m).is_integer()) continue;
            INFO("j=" << j.str() << " m=" << m.str());
            auto g = theta_g({j, m}, T), h = theta_h({j, m}, T);
            // reflection and period
            check_equal(h, theta_h({-j, m}, T), T);
            check_equal(h, theta_h({Frac(2) * m + j, m}, T), T);
            check_equal(g, theta_g({-j, m}, T), T);
            check_equal(g, -theta_g({Frac(2) * m + j, m}, T), T);
            // change to modulus 4m
            auto a = theta_h({Frac(2) * j, Frac(4) * m}, T), b = theta_h({Frac(4) * m - Frac(2) * j, Frac(4) * m}, T);
            check_equal(h, a + b, T);
            check_equal(g, a - b, T);
            // doubling tau: q -> q^2
            check_equal(substitute_q_power(h, 2), theta_h({Frac(2) * j, Frac(2) * m}, T * Frac(2)), T * Frac(2));
            check_equal(substitute_q_power(g, 2), theta_g({Frac(2) * j, Frac(2) * m}, T * Frac(2)), T * Frac(2));
        }
}

TEST_CASE("Nahm enumeration is unchanged by doubling the search box") {
    int tested = 0;
    while (tested < 20) {
        const std::size_t r = 2 + rng() % 2;
        FracMatrix G(r, std::vector<Frac>(r));
        for (std::size_t a = 0; a < r; ++a) {
            G[a][a] = Frac(1 + static_cast<std::int64_t>(rng() % 4));
            for (std::size_t b = 0; b < a; ++b) G[a][b] = G[b][a] = Frac(static_cast<std::int64_t>(rng() % 5) - 2, 2);
        }
        std::vector<std::vector<Rational>> R(r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) R[a].emplace_back(G[a][b].num(), G[a][b].den());
        if (!ldlt_pivots(R).ok) continue;
        std::vector<Frac> B(r);
        for (auto& x : B) x = Frac(static_cast<std::int64_t>(rng() % 7) - 3, 2);
        auto quad = NahmQuadruple::from_form(G, B, 0);
        const Frac T = 16;
        NahmStats st;
        auto base = nahm_sum(quad, T, {kernels::Exec::Serial, true, 1}, &st);
        INFO("quadruple " << tested);
        CHECK(st.lambda > 0);
        check_equal(base, nahm_sum(quad, T, {kernels::Exec::Serial, true, 2}), T);
        check_equal(base, nahm_sum(quad, T, {kernels::Exec::Serial, false, 2}), T);
        check_equal(base, nahm_sum(quad, T, {kernels::Exec::Parallel, true, 1}), T);
        ++tested;
    }
    NahmStats pruned, full;
    auto f = andrews_gordon_form(4, 2);
    check_equal(expand_quadratic_sum(f, 40, {kernels::Exec::Serial, true, 1}, &pruned),
                expand_quadratic_sum(f, 40, {kernels::Exec::Serial, false, 1}, &full), 40);
    CHECK(pruned.leaves < full.leaves);
}

TEST_CASE("rank at most two: enumeration equals the brute-force box at order 12") {
    const Frac vals[4] = {Frac(1, 2), 1, 2, 3};
    auto pick = [&] { return vals[rng() % 4]; };
    int tested = 0;
    while (tested < 20) {
        const std::size_t r = 1 + rng() % 2;
        FracMatrix G(r, std::vector<Frac>(r));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b <= a; ++b) G[a][b] = G[b][a] = pick();
        if (r == 2 && !(G[0][0] * G[1][1] - G[0][1] * G[0][1] > Frac(0))) continue;
        std::vector<Frac> B(r);
        for (auto& x : B) x = pick() - Frac(1);
        const std::int64_t T = 12;
        NahmQuadruple quad = NahmQuadruple::from_form(G, B, 0);
        INFO("case " << tested);
        check_against_box(nahm_sum(quad, T), oracle::box_quadratic_sum(G, B, std::vector<std::int64_t>(r, 1), 40, T), T);
        ++tested;
    }
    // generalized sums with D != I and the copositive four-sum form
    auto f = example_form("222-x1");
    check_against_box(expand_quadratic_sum(f, 14), oracle::box_quadratic_sum(f.G, f.B, f.D, 16, 14), 14);
    auto g = example_form("mod20-x2");
    check_against_box(expand_quadratic_sum(g, 14), oracle::box_quadratic_sum(g.G, g.B, g.D, 16, 14), 14);
}

TEST_CASE("doubling the precision never worsens a residual by more than 4x") {
    const double log10_4 = 0.61;
    for (const char* name : {"RR", "KR", "Capparelli", "AG-k3", "G0-k4", "ex2-k1", "x48"}) {
        const auto& c = find_transform_case(name);
        auto lo = verify_transform(c, {"1/5+1/2*i"}, 128);
        auto hi = verify_transform(c, {"1/5+1/2*i"}, 256);
        REQUIRE(lo.rows.size() == hi.rows.size());
        for (std::size_t i = 0; i < lo.rows.size(); ++i) {
            INFO(name << " " << lo.rows[i].kind);
            CHECK(hi.rows[i].log10_residual <= lo.rows[i].log10_residual + log10_4);
        }
    }
}
