#include "doctest.h"
#include "checks.hpp"
#include "oracles.hpp"

#include "qmod/nahm.hpp"
#include "qmod/products.hpp"

#include <random>

using namespace qmod;

namespace {

Rational rat(const PuiseuxSeries& s, Frac e) { return s.coeff(e).rational_value(); }

// (q^{a_1}, ..., q^{a_n}; q^m)^{power}
ProductSpec P(std::initializer_list<std::int64_t> as, std::int64_t m, int power = 1) { return pochs(as, m, 1, power); }
// (-q^{a_1}, ...; q^m)
ProductSpec Pm(std::initializer_list<std::int64_t> as, std::int64_t m) { return pochs(as, m, -1, 1); }

ProductSpec with_scalar(ProductSpec s, Rational c, Frac pre = 0) {
    s.scalar *= c;
    s.prefactor = s.prefactor + pre;
    return s;
}

// Product side of the odd-modulus family: (q^i, q^{M-i}, q^M; q^M) / (q;q).
ProductSpec ag_product(int k, int i) {
    const int M = 2 * k + 1;
    return P({i, M - i, M}, M).times(P({1}, 1, -1));
}
ProductSpec bressoud_product(int k, int i) {
    const int M = 2 * k;
    return P({i, M - i, M}, M).times(P({1}, 1, -1));
}

}  // namespace

TEST_CASE("rank one Nahm sums") {
    NahmQuadruple rr{{{Frac(2)}}, {Frac(0)}, Frac(0), {1}};
    auto g = nahm_sum(rr, 7);
    const std::int64_t expect[7] = {1, 1, 1, 1, 2, 2, 3};
    for (int k = 0; k < 7; ++k) CHECK(rat(g, k) == expect[k]);
    check_equal(nahm_sum(rr, 200), P({1, 4}, 5, -1).build(200), 200);

    NahmQuadruple h{{{Frac(2)}}, {Frac(1)}, Frac(11, 60), {}};
    auto hs = nahm_sum(h, 40);
    CHECK(hs.order() == Frac(11, 60));
    check_equal(hs, with_scalar(P({2, 3}, 5, -1), 1, Frac(11, 60)).build(40), 40);
}

TEST_CASE("Andrews-Gordon and Bressoud sums") {
    check_equal(andrews_gordon_sum(2, 2, 60), P({1, 4}, 5, -1).build(60), 60);
    auto h = andrews_gordon_sum(2, 1, 60);
    CHECK(rat(h, 0) == 1);
    CHECK(rat(h, 1) == 0);
    for (int k = 2; k <= 4; ++k)
        for (int i = 1; i <= k; ++i) {
            INFO("k=" << k << " i=" << i);
            check_equal(andrews_gordon_sum(k, i, 60), ag_product(k, i).build(60), 60);
            check_equal(bressoud_sum(k, i, 60), bressoud_product(k, i).build(60), 60);
            CHECK(compare_to_order(andrews_gordon_sum(k, i, 1), PuiseuxSeries::one(), 1).equal);
        }
    // partition oracle: parts not congruent to 0, +-1 mod 7
    auto cnt = oracle::restricted_partitions(50, [](int p) { int r = p % 7; return r != 0 && r != 1 && r != 6; });
    auto s = andrews_gordon_sum(3, 1, 50);
    for (int n = 0; n < 50; ++n) CHECK(rat(s, n) == cnt[n]);
    CHECK_THROWS_AS(andrews_gordon_sum(1, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(bressoud_sum(3, 4, 10), std::invalid_argument);
}

TEST_CASE("Capparelli and Kanade-Russell sums") {
    auto a1 = capparelli_sum(1, 40);
    auto cnt = oracle::distinct_partitions(40, [](int p) { int r = p % 6; return r == 0 || r == 2 || r == 3 || r == 4; });
    for (int n = 0; n < 40; ++n) CHECK(rat(a1, n) == cnt[n]);
    check_equal(a1, Pm({2, 3, 4, 6}, 6).build(40), 40);

    auto a2 = capparelli_sum(2, 40);
    CHECK(rat(a2, 0) == 1);
    CHECK(rat(a2, 1) == 1);
    check_equal(a2, Pm({1, 3, 5, 6}, 6).build(40), 40);

    // partitions into parts congruent to +-1, +-3 mod 9
    auto b1 = kanade_russell_sum(1, 60);
    auto parts = oracle::restricted_partitions(60, [](int p) { int r = p % 9; return r == 1 || r == 3 || r == 6 || r == 8; });
    for (int n = 0; n < 60; ++n) CHECK(rat(b1, n) == parts[n]);
    check_equal(b1, P({1, 3, 6, 8}, 9, -1).build(60), 60);
    check_equal(kanade_russell_sum(2, 60), P({2, 3, 6, 7}, 9, -1).build(60), 60);
    check_equal(kanade_russell_sum(3, 60), P({3, 4, 5, 6}, 9, -1).build(60), 60);
    CHECK(kanade_russell_sum(3, 10).order() == Frac(0));
}

TEST_CASE("nested sums with Laurent prefactors") {
    for (int k = 2; k <= 4; ++k)
        for (int i = 1; i <= k; ++i) {
            INFO("k=" << k << " i=" << i);
            const int M = 4 * k;
            auto b4k = P({2}, 4).times(P({2 * i - 1, M - 2 * i + 1, M}, M)).times(P({1}, 1, -1));
            check_equal(bressoud_4k_sum(k, i, 40), b4k.build(40), 40);
            const int N = 4 * k - 2;
            auto hj = Pm({1}, 1).times(P({2 * i - 1, N + 1 - 2 * i, N}, N)).times(P({1}, 1, -1));
            check_equal(overpartition_bressoud_sum(k, i, 40), hj.build(40), 40);
        }
    // n = 0 only: (1 + q^0) = 2 for i < k, the n_k := 0 convention for i = k,
    // and the (a; q^2)_{-1} = 1/2 prefactor in both cases.
    CHECK(rat(overpartition_bressoud_sum(2, 1, 1), 0) == 1);
    CHECK(rat(overpartition_bressoud_sum(2, 2, 1), 0) == 1);
    CHECK(rat(bressoud_4k_sum(3, 2, 1), 0) == 1);
    CHECK_THROWS_AS(overpartition_bressoud_sum(2, 3, 10), std::invalid_argument);
}

TEST_CASE("application example sums against their products") {
    const Frac T = 30;
    struct Case {
        std::string id;
        ProductSpec product;
    };
    auto inv = [](ProductSpec s) {
        for (auto& f : s.factors) f.power = -f.power;
        return s;
    };
    auto Jq = [](std::int64_t m, int power) { return jm(m, power); };
    std::vector<Case> cases = {
        {"111-mod5-x1", Pm({1}, 2).times(P({2, 8}, 10, -1))},
        {"111-mod5-x2", Pm({1}, 2).times(P({4, 6}, 10, -1))},
        {"111-mod5-x3", Pm({2}, 2).times(P({2, 8}, 10, -1))},
        {"111-mod5-x4", Pm({2}, 2).times(P({4, 6}, 10, -1))},
        {"mod20-x1", Pm({1}, 1).times(P({4, 16}, 20, -1))},
        {"mod20-x2", Pm({1}, 1).times(P({8, 12}, 20, -1))},
        {"mod5-x1", P({1, 4}, 5, -2)},
        {"mod5-x2", P({2, 3}, 5, -2)},
        {"mod5-x3", Jq(5, 1).times(Jq(1, -1))},
        {"22-x1", Jq(2, 3).times(P({3, 5, 8}, 8)).times(Jq(1, -2)).times(Jq(4, -2))},
        {"22-x2", Jq(2, 3).times(P({1, 7, 8}, 8)).times(Jq(1, -2)).times(Jq(4, -2))},
        {"24-x1", Jq(2, 3).times(Jq(3, 2)).times(Jq(1, -2)).times(Jq(4, -2)).times(Jq(6, -1))},
        {"24-x2", Jq(2, 2).times(Jq(6, 2)).times(Jq(1, -1)).times(Jq(3, -1)).times(Jq(4, -2))},
        {"222-x1", Jq(3, 2).times(Jq(4, 1)).times(Jq(1, -1)).times(Jq(2, -1)).times(Jq(6, -1))},
        {"222-x2", Jq(4, 1).times(Jq(6, 2)).times(Jq(2, -2)).times(Jq(3, -1))},
        {"222-x3", Jq(2, 2).times(Jq(3, 2)).times(Jq(1, -2)).times(Jq(4, -1)).times(Jq(6, -1))},
        {"222-x4", Jq(2, 1).times(Jq(6, 2)).times(Jq(1, -1)).times(Jq(3, -1)).times(Jq(4, -1))},
        {"mod12-x1", Jq(2, 3).times(P({5, 7, 12}, 12)).times(Jq(1, -2)).times(Jq(4, -2))},
        {"mod12-x2", Jq(2, 3).times(P({3, 9, 12}, 12)).times(Jq(1, -2)).times(Jq(4, -2))},
        {"mod12-x3", Jq(2, 3).times(P({1, 11, 12}, 12)).times(Jq(1, -2)).times(Jq(4, -2))},
        {"mod8-x1", Pm({1}, 1).times(P({1, 4, 7}, 8, -1))},
        {"mod8-x2", Pm({1}, 1).times(P({3, 4, 5}, 8, -1))},
        // (-1; q^4) = 2 (-q^4; q^4)
        {"48-x1", with_scalar(Pm({4}, 4).times(P({2, 3, 5}, 5)).times(inv(P({1, 3, 4}, 4))), 2)},
        {"48-x2", with_scalar(Pm({4}, 4).times(P({1, 4, 5}, 5)).times(inv(P({1, 3, 4}, 4))), 2)},
    };
    for (const auto& c : cases) {
        INFO(c.id);
        check_equal(example_sum(c.id, T), c.product.build(T), T);
    }

    for (int k = 2; k <= 3; ++k)
        for (int i = 1; i <= k + 1; ++i) {
            INFO("ex1 k=" << k << " i=" << i);
            const int M = 2 * k + 3;
            auto prod = Pm({1}, 2).times(P({i, M - i, M}, M)).times(P({2}, 2, -1));
            check_equal(example_sum("ex1", T, k, i), prod.build(T), T);
        }
    for (int k = 1; k <= 2; ++k)
        for (int i = 1; i <= k + 1; ++i) {
            INFO("ex2 k=" << k << " i=" << i);
            const int M = 8 * k + 12;
            auto prod = P({4 * i, M - 4 * i, M}, M).times(P({1}, 1, -1));
            check_equal(example_sum("ex2", T, k, i), prod.build(T), T);
        }

    // the 1/2 and the twin term at n = (0, 0, 1) give constant term 1
    CHECK(rat(example_sum("222-x2", 1), 0) == 1);
    // 2i^2 - 4ij + 3j^2 - 2i + 4j is never negative, and 0 at i = j = 0 and i = 1, j = 0
    CHECK(example_sum("48-x2", 1).order() == Frac(0));
    CHECK(rat(example_sum("48-x2", 1), 0) == 2);

    CHECK(example_ids().size() == 26);
    CHECK_THROWS_AS(example_form("nope"), std::invalid_argument);
    CHECK_THROWS_AS(example_form("ex1", 1, 1), std::invalid_argument);
}

TEST_CASE("quadruple validation and parsing") {
    auto q = parse_quadruple_json(R"({"A": [["2", "1"], [1, "3/2"]], "B": ["1/2", 0], "C": "-1/40", "D": [1, 2]})");
    CHECK(q.rank() == 2);
    CHECK(q.A[0][1] == Frac(1));
    CHECK(q.C == Frac(-1, 40));
    // AD = [[2, 2], [1, 3]] is not symmetric
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);

    try {
        parse_quadruple_json("{\n  \"A\": [[2]],\n  \"B\": [0,]\n}");
        FAIL("expected a parse error");
    } catch (const QuadrupleParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 1);
    }
    try {
        parse_quadruple_json("{\n  \"A\": [[2]],\n  \"B\": [\"x/y\"]\n}");
        FAIL("expected a parse error");
    } catch (const QuadrupleParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column == 3);
    }
    CHECK_THROWS_AS(parse_quadruple_json(R"({"B": [0]})"), QuadrupleParseError);

    NahmQuadruple bad{{{Frac(1), Frac(2)}, {Frac(2), Frac(1)}}, {Frac(0), Frac(0)}, Frac(0), {}};
    try {
        bad.validate();
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.index == 1);
        CHECK(e.pivot == Rational(-3));
    }
    CHECK_THROWS_AS(nahm_sum(bad, 10), NotPositiveDefinite);

    auto ld = ldlt_pivots({{Rational(4), Rational(2)}, {Rational(2), Rational(3)}});
    CHECK(ld.ok);
    CHECK(ld.pivots[1] == Rational(2));
    // eigenvalues of [[2, 1], [1, 2]] are 1 and 3
    auto lam = least_eigenvalue_lower_bound({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}});
    CHECK(lam > 0);
    CHECK(lam <= 1);
    CHECK(lam > Rational(99, 100));
}

TEST_CASE("family names") {
    auto s = parse_family("AG k=3 i=2");
    CHECK(s.family == SumFamily::AndrewsGordon);
    CHECK(s.k == 3);
    CHECK(s.i == 2);
    CHECK(parse_family("Capparelli 2").which == 2);
    CHECK(parse_family("KR b3").which == 3);
    CHECK(parse_family("example 222-x1").example == "222-x1");
    CHECK(parse_family("OvB k=2 i=1").family == SumFamily::OverpartitionBressoud);
    CHECK_THROWS_AS(parse_family("Foo"), std::invalid_argument);
    check_equal(expand_family(parse_family("B4k k=2 i=1"), 20), bressoud_4k_sum(2, 1, 20), 20);
}
