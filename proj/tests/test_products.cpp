#include "doctest.h"
#include "oracles.hpp"

#include "qmod/products.hpp"

using namespace qmod;

namespace {

Rational rat(const PuiseuxSeries& s, Frac e) { return s.coeff(e).rational_value(); }

// Rational series sum_{n < T} c[n] q^{n + shift}.
PuiseuxSeries from_coeffs(const std::vector<std::int64_t>& c, Frac shift_by = 0) {
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (c[n] == 0) continue;
        exps.push_back(static_cast<std::int64_t>(n));
        nums.emplace_back(static_cast<long>(c[n]));
    }
    auto s = PuiseuxSeries::from_raw(Ring{}, 1, exps, nums, 1, Frac(static_cast<std::int64_t>(c.size())));
    return shift(s, shift_by);
}

}  // namespace

TEST_CASE("poch_product matches pochhammer") {
    auto a = poch_product({{Frac(1, 2), 1, -1, 1, std::nullopt}, {Frac(3), 3, 1, -2, std::nullopt}}, 25);
    auto b = mul(pochhammer(Frac(1, 2), CycloElement::integer(-1), 1, std::nullopt, 25),
                 pow(pochhammer(3, std::nullopt, 3, std::nullopt, 25), -2));
    CHECK(compare_to_order(a, b, 25).equal);
    auto fin = poch_product({{Frac(2), 1, 1, 1, 3}}, kExactOrder);
    CHECK(fin.is_exact());
    CHECK(fin == pochhammer(2, std::nullopt, 1, 3, kExactOrder));
    CHECK_THROWS_AS(poch_product({{Frac(0), 1, 1, 1, std::nullopt}}, 10), std::domain_error);
}

TEST_CASE("eta series") {
    auto e = eta_series(1, 30);
    CHECK(e.order() == Frac(1, 24));
    auto pent = oracle::pentagonal(29);
    for (int k = 0; k < 29; ++k) CHECK(rat(e, Frac(k) + Frac(1, 24)) == pent[k]);
    CHECK(eta_series(24, 100).order() == Frac(1));
    CHECK(compare_to_order(substitute_q_power(eta_series(1, 20), 3), eta_series(3, 60), 60).equal);

    // eta(4t) eta(6t)^2 / (eta(2t) eta(3t) eta(12t)) = q^{-1/24} (-q^2,-q^3,-q^4,-q^6; q^6)_inf
    EtaQuotientSpec X1{{{4, 1}, {6, 2}, {2, -1}, {3, -1}, {12, -1}}};
    auto x = eta_quotient(X1, 60);
    auto cnt = oracle::distinct_partitions(61, [](int p) { int r = p % 6; return r == 0 || r == 2 || r == 3 || r == 4; });
    CHECK(compare_to_order(x, from_coeffs(cnt, Frac(-1, 24)), 60).equal);
}

TEST_CASE("Weber functions") {
    CHECK(weber_f2(10).order() == Frac(1, 24));
    auto f = weber_f(30);
    CHECK(rat(f, Frac(-1, 48) + Frac(1, 2)) == 1);
    auto f1f2 = mul(weber_f1(30), weber_f2(30));
    auto direct = shift(mul(pochhammer(Frac(1, 2), std::nullopt, 1, std::nullopt, 30),
                            pochhammer(1, CycloElement::integer(-1), 1, std::nullopt, 30)),
                        Frac(-1, 48) + Frac(1, 24));
    CHECK(compare_to_order(f1f2, direct, 29).equal);
}

TEST_CASE("generalized Dedekind eta") {
    CHECK(bernoulli2(Frac(1, 2)) == Frac(-1, 12));
    CHECK(gen_dedekind_eta(2, 1, 0, 10).order() == Frac(-1, 24));

    // 1 / (E_{1,0}(9t) E_{3,0}(9t)) = q^{-1/18} / (q, q^3, q^6, q^8; q^9)_inf
    auto E1 = substitute_q_power(gen_dedekind_eta(9, 1, 0, 6), 9);
    auto E3 = substitute_q_power(gen_dedekind_eta(9, 3, 0, 6), 9);
    auto X = invert(mul(E1, E3));
    auto cnt = oracle::restricted_partitions(46, [](int p) { int r = p % 9; return r == 1 || r == 3 || r == 6 || r == 8; });
    CHECK(compare_to_order(X, to_ring(from_coeffs(cnt, Frac(-1, 18)), 9), 45).equal);

    for (auto [g, h] : std::vector<std::pair<int, int>>{{1, 0}, {2, 3}, {4, 7}, {0, 2}, {-3, 5}}) {
        CHECK(gen_dedekind_eta(9, g, h + 9, 8) == gen_dedekind_eta(9, g, h, 8));
        auto shifted = gen_dedekind_eta(9, g + 9, h, 8);
        auto expect = scale(gen_dedekind_eta(9, g, h, 8), -cyclo_embed(-h, 9));
        CHECK(compare_to_order(shifted, expect, 8).equal);
    }
    CHECK_THROWS_AS(gen_dedekind_eta(9, 9, 18, 5), std::invalid_argument);
}

TEST_CASE("theta series") {
    auto g01 = theta_g({0, 1}, 10);
    CHECK(rat(g01, 0) == 1);
    CHECK(rat(g01, 1) == -2);
    CHECK(rat(g01, 4) == 2);
    CHECK(rat(g01, 9) == -2);
    CHECK(theta_g({2, 2}, 20).is_zero());
    CHECK(theta_g({Frac(5, 2), Frac(5, 2)}, 20).is_zero());

    for (int m2 = 1; m2 <= 8; ++m2)
        for (int j2 = -3 * m2; j2 <= 3 * m2; ++j2) {
            const Frac j(j2, 2), m(m2, 2);
            const long V = 8L * m2 * 20;
            for (bool alt : {true, false}) {
                auto ref = oracle::theta_direct(j2, m2, V, alt);
                auto s = alt ? theta_g({j, m}, 20) : theta_h({j, m}, 20);
                for (long v = 0; v < V; ++v) {
                    if (ref[v] != 0) CHECK(rat(s, Frac(v, 8L * m2)) == ref[v]);
                }
            }
        }

    // x3 of the rank-3 mod-5 family: g_{1/2,5/2} g_{3/2,5/2} / eta^2 = q^{1/6} (q^5;q^5)/(q;q)
    const Frac T = 30;
    auto num = mul(theta_g({Frac(1, 2), Frac(5, 2)}, T), theta_g({Frac(3, 2), Frac(5, 2)}, T));
    auto x3 = mul(num, invert(pow(eta_series(1, T), 2)));
    auto cnt = oracle::restricted_partitions(30, [](int p) { return p % 5 != 0; });
    CHECK(compare_to_order(x3, from_coeffs(cnt, Frac(1, 6)), 29).equal);
}

TEST_CASE("J products and the crank function") {
    auto j15 = j_product(1, 5, 10);
    std::vector<long> expect{1, -1, 0, 0, -1, 0, 0, 0, 0, 0};
    // bilateral sum (-1)^n q^{5n(n-1)/2 + n}
    std::vector<long> jtp(10, 0);
    for (int n = -5; n <= 5; ++n) {
        int e = 5 * n * (n - 1) / 2 + n;
        if (e >= 0 && e < 10) jtp[e] += (n % 2 == 0) ? 1 : -1;
    }
    for (int k = 0; k < 10; ++k) {
        CHECK(rat(j15, k) == jtp[k]);
        if (k < 5) CHECK(rat(j15, k) == expect[k]);
    }
    CHECK(j_product(2, 7, 40) == j_product(5, 7, 40));
    CHECK_THROWS_AS(j_product(0, 5, 10), std::invalid_argument);

    auto p = crank_gf(CycloElement::integer(1), 40);
    auto cnt = oracle::restricted_partitions(40, [](int) { return true; });
    CHECK(compare_to_order(p, from_coeffs(cnt), 40).equal);

    for (int t : {1, 2}) {
        const Frac T = 30;
        CycloElement z = cyclo_embed(t, 9);
        auto inv27 = jm(27, -1);
        auto c0 = j_spec(6, 27).times(j_spec(12, 27)).times(inv27).build(T);
        auto c1 = j_spec(3, 27).times(j_spec(12, 27)).times(inv27).build(T);
        auto c2 = j_spec(3, 27).times(j_spec(6, 27)).times(inv27).build(T);
        auto one = CycloElement::integer(1, 9);
        auto z2 = z * z, z4 = z2 * z2, z5 = z4 * z;
        auto rhs = to_ring(c0, 9);
        rhs = rhs + scale(shift(to_ring(c1, 9), 1), -(one - z + z2 + z5));
        rhs = rhs + scale(shift(to_ring(c2, 9), 2), z2 - z - z4);
        CHECK(compare_to_order(crank_gf(z, T), rhs, T).equal);
    }
}
