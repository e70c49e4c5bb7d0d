#include "doctest.h"

#include "qmod/products.hpp"
#include "qmod/transforms.hpp"

#include <cmath>

using namespace qmod;
using AN = AlgebraicNumber;

namespace {

double log10_of(const BigFloat& x) { return x.is_zero() ? -999 : x.log2_abs() * std::log10(2.0); }

}  // namespace

TEST_CASE("algebraic numbers reduce exactly") {
    CHECK(algebraically_equal(AN::cos_pi(Frac(1, 3)), AN::rational(Rational(1, 2))));
    CHECK(algebraically_equal(AN::sin_pi(Frac(1, 4)) * AN::sqrt(2), AN(1)));
    CHECK(algebraically_equal(AN::i() * AN::i(), AN(-1)));
    CHECK(algebraically_equal(AN::zeta(18, 9), AN(-1)));
    CHECK(algebraically_equal(AN::sqrt(5), AN(2) * AN::cos_pi(Frac(1, 5)) * AN(2) - AN(1)));
    CHECK_FALSE(algebraically_equal(AN::cos_pi(Frac(1, 5)), AN::sin_pi(Frac(1, 5))));
    auto x = AN::sin_pi(Frac(2, 9));
    CHECK(algebraically_equal(x * x.inverse(), AN(1)));
}

TEST_CASE("A_5 is the sine matrix") {
    auto A = matrix_A(5);
    REQUIRE(A.rows() == 2);
    CHECK(algebraically_equal(A.at(0, 0), AN::sin_pi(Frac(2, 5))));
    CHECK(algebraically_equal(A.at(0, 1), AN::sin_pi(Frac(1, 5))));
    CHECK(algebraically_equal(A.at(1, 0), AN::sin_pi(Frac(1, 5))));
    CHECK(algebraically_equal(A.at(1, 1), -AN::sin_pi(Frac(2, 5))));
}

TEST_CASE("(2/sqrt k) A_k is an involution for odd k") {
    for (int k = 3; k <= 11; k += 2) {
        auto S = (AN(2) * AN::sqrt(Rational(1, k))) * matrix_A(k);
        auto n = S.numeric(200);
        auto sq = num_mul(n, n);
        auto I = AlgebraicMatrix::identity(S.rows()).numeric(200);
        INFO("k = " << k);
        CHECK(log10_of(num_max_diff(sq, I)) < -30);
    }
}

TEST_CASE("T matrices are unitary diagonal") {
    for (const auto& c : registry_transform_cases()) {
        INFO(c.name);
        REQUIRE(c.T.is_diagonal());
        for (int i = 0; i < c.T.rows(); ++i) {
            auto z = c.T.at(i, i).numeric(200);
            CHECK(log10_of((z.abs() - BigFloat(1, 200)) * (z.abs() - BigFloat(1, 200))) < -100);
            auto cz = c.T.at(i, i).to_cyclo();
            REQUIRE(cz.has_value());
            // a root of unity: some power is exactly 1
            auto p = *cz;
            bool found = false;
            for (int e = 1; e <= 1000 && !found; ++e) {
                if ((p - CycloElement::integer(1, p.conductor())).is_zero()) found = true;
                p = p * *cz;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("Andrews-Gordon k = 2 carries the Rogers-Ramanujan S-matrix") {
    const auto& ag = find_transform_case("AG-k2");
    const auto& rr = find_transform_case("RR");
    auto pick = [](const TransformCase& c) {
        for (const auto& r : c.rules)
            if (r.kind == "S") return r.matrix;
        throw std::logic_error("no S rule");
    };
    auto a = pick(ag).numeric(200), b = pick(rr).numeric(200);
    CHECK(log10_of(num_max_diff(a, b)) < -30);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(algebraically_equal(pick(ag).at(i, j), pick(rr).at(i, j)));
}

TEST_CASE("composite matrix") {
    auto P = AlgebraicMatrix({{AN(1), AN(1)}, {AN(1), AN(-1)}});
    auto T = AlgebraicMatrix::diagonal({AN::i(), AN(1)});
    auto C = compose_gamma0(P, T);
    // P diag(-i, 1) P
    CHECK(algebraically_equal(C.at(0, 0), AN(1) - AN::i()));
    CHECK(algebraically_equal(C.at(0, 1), AN(-1) - AN::i()));
    CHECK(algebraically_equal(C.at(1, 1), AN(1) - AN::i()));
    CHECK_THROWS(compose_gamma0(P, P));
    CHECK_THROWS(compose_gamma0(P, AlgebraicMatrix::diagonal({AN(0), AN(1)})));
}

TEST_CASE("alpha constants in Q(zeta_18)") {
    for (const auto& r : cyclo_constant_check()) {
        INFO(r.name << " " << r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("theta series T-rule holds exactly on exponents") {
    // g_{j,m} has exponents (2mn + j)^2/(4m); with j + m integral they all
    // differ from j^2/(4m) by integers, so g(tau + 1) = e^{pi i j^2/(2m)} g(tau).
    int checked = 0;
    for (int m2 = 1; m2 <= 10 && checked < 20; ++m2)
        for (int j2 = 0; j2 <= m2 && checked < 20; ++j2) {
            const Frac m(m2, 2), j(j2, 2);
            if (!(j + m).is_integer()) continue;
            auto g = theta_g({j, m}, 30);
            const Frac base = j * j / (Frac(4) * m);
            for (const auto& [e, c] : g.terms()) {
                INFO("j=" << j.str() << " m=" << m.str() << " e=" << e.str());
                CHECK((e - base).is_integer());
            }
            ++checked;
        }
    CHECK(checked == 20);
}

TEST_CASE("registry transforms verify at one point") {
    for (const char* name : {"RR", "KR", "AG-k3", "G1-k3", "ex1-k2", "x48"}) {
        auto rep = verify_transform(find_transform_case(name), {"1/5+1/2*i"}, 192);
        INFO(name);
        CHECK(rep.ok());
    }
}

TEST_CASE("sample point parsing rejects the lower half plane") {
    CHECK_THROWS(verify_transform(find_transform_case("RR"), {"1-i"}, 192));
}

TEST_CASE("Kanade-Russell vector at tau = i/sqrt(3)") {
    BigComplex tau(256);
    mpfr_set_ui(tau.im.get(), 3, MPFR_RNDN);
    mpfr_rec_sqrt(tau.im.get(), tau.im.get(), MPFR_RNDN);
    auto rep = verify_transform(find_transform_case("KR"), std::vector<SamplePoint>{{"i/sqrt(3)", tau}}, 192);
    for (const auto& r : rep.rows) {
        INFO(r.kind);
        CHECK(r.log10_residual < -25);
    }
}

TEST_CASE("Rogers-Ramanujan vector at tau = i") {
    auto rep = verify_transform(find_transform_case("RR"), {"i"}, 192);
    for (const auto& r : rep.rows) CHECK(r.log10_residual < -30);
}
