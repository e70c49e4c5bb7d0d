#include "doctest.h"

#include "qmod/numeric.hpp"
#include "qmod/products.hpp"

#include <cmath>
#include <random>

using namespace qmod;

namespace {

constexpr mpfr_prec_t kPrec = 192;

double log10_diff(const BigComplex& a, const BigComplex& b) {
    auto d = (a - b).abs();
    if (d.is_zero()) return -999;
    return d.log2_abs() * std::log10(2.0);
}

BigComplex tau_of(const char* s) { return parse_tau(s, kPrec); }

}  // namespace

TEST_CASE("eta(i) against the Gamma(1/4) closed form") {
    // Gamma(1/4) / (2 pi^{3/4}), computed with MPFR's own gamma.
    mpfr_t g, p;
    mpfr_inits2(kPrec, g, p, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(g, 1, MPFR_RNDN);
    mpfr_div_ui(g, g, 4, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    mpfr_const_pi(p, MPFR_RNDN);
    mpfr_rootn_ui(p, p, 4, MPFR_RNDN);
    mpfr_pow_ui(p, p, 3, MPFR_RNDN);
    mpfr_mul_ui(p, p, 2, MPFR_RNDN);
    mpfr_div(g, g, p, MPFR_RNDN);
    BigComplex expect(kPrec);
    mpfr_set(expect.re.get(), g, MPFR_RNDN);
    mpfr_clears(g, p, static_cast<mpfr_ptr>(nullptr));

    auto e = eval_eta(tau_of("i"), {kPrec});
    CHECK(e.converged);
    CHECK(log10_diff(e.value, expect) < -30);
}

TEST_CASE("tau parsing") {
    auto t = parse_tau_exact("1/5+1/2*i");
    CHECK(t.re == Rational(1, 5));
    CHECK(t.im == Rational(1, 2));
    CHECK(parse_tau_exact("i").im == 1);
    CHECK(parse_tau_exact("2*i").im == 2);
    CHECK(parse_tau_exact("-1/3+2/3*i").re == Rational(-1, 3));
    CHECK_THROWS(parse_tau_exact("1/2"));
    CHECK_THROWS(parse_tau_exact("1-i"));
    CHECK_THROWS(parse_tau_exact("abc"));
}

TEST_CASE("principal square root branch") {
    auto r = sqrt_principal(BigComplex::from_long(-4, kPrec));
    CHECK(log10_diff(r, BigComplex::from_rational(0, 2, kPrec)) < -50);
    // just below the negative real axis the root has negative imaginary part
    auto z = BigComplex::from_rational(-1, Rational(-1, 1000000), kPrec);
    CHECK(sqrt_principal(z).im.sign() < 0);
    CHECK(sqrt_principal(z).re.sign() > 0);
    CHECK_THROWS(sqrt_principal(BigComplex::from_long(0, kPrec)));
}

TEST_CASE("Mobius maps") {
    CHECK_THROWS(MobiusMap(1, 1, 1, 1));
    auto st = MobiusMap::S() * MobiusMap::T();
    CHECK(st.a == 0);
    CHECK(st.b == -1);
    CHECK(st.c == 1);
    CHECK(st.d == 1);
    // (ST)^3 = -I acts trivially
    auto tau = tau_of("1/7+9/10*i");
    auto g3 = st * st * st;
    CHECK(log10_diff(mobius_apply(g3, tau), tau) < -50);
    CHECK_THROWS(mobius_apply(MobiusMap::S(), BigComplex::from_long(0, kPrec)));
}

TEST_CASE("series and product evaluation agree") {
    for (const char* s : {"i", "1/5+1/2*i", "-1/3+2/3*i"}) {
        auto tau = tau_of(s);
        auto spec = pochs({1, 4}, 5, 1, -1);
        auto ser = spec.build(400);
        auto a = eval_series(ser, tau, kPrec);
        auto b = eval_product(spec, tau, {kPrec});
        CHECK(b.converged);
        CHECK(log10_diff(a.value, b.value) < -40);
    }
}

TEST_CASE("eta under S and T") {
    const char* pts[] = {"i", "1/5+1/2*i", "-1/3+2/3*i", "2/7+3/4*i", "1/2+6/5*i"};
    for (const char* s : pts) {
        auto tau = tau_of(s);
        auto e = certified(eval_eta(tau, {kPrec}), "eta");
        // eta(-1/tau) = sqrt(-i tau) eta(tau)
        auto minus_inv = -(BigComplex::from_long(1, kPrec) / tau);
        auto lhs = certified(eval_eta(minus_inv, {kPrec}), "eta");
        auto mi = BigComplex::from_rational(0, -1, kPrec);
        CHECK(log10_diff(lhs, sqrt_principal(mi * tau) * e) < -40);
        // eta(tau + 1) = e^{pi i/12} eta(tau)
        auto t1 = certified(eval_eta(tau + BigComplex::from_long(1, kPrec), {kPrec}), "eta");
        CHECK(log10_diff(t1, exp_pi_i(Frac(1, 12), kPrec) * e) < -40);
    }
}

TEST_CASE("Weber function relations") {
    const char* pts[] = {"i", "1/5+1/2*i", "-1/3+2/3*i", "2/7+3/4*i", "1/2+6/5*i"};
    const auto one = BigComplex::from_long(1, kPrec);
    const auto sixteen = BigComplex::from_long(16, kPrec);
    for (const char* s : pts) {
        auto tau = tau_of(s);
        auto f = certified(eval_product(weber_f_spec(), tau, {kPrec}), "f");
        auto f1 = certified(eval_product(weber_f1_spec(), tau, {kPrec}), "f1");
        auto f2 = certified(eval_product(weber_f2_spec(), tau, {kPrec}), "f2");
        // f2 here is the Weber f2 divided by sqrt(2)
        CHECK(log10_diff(f * f1 * f2, one) < -40);
        auto f8 = pow(f, 8), f18 = pow(f1, 8), f28 = pow(f2, 8);
        CHECK(log10_diff(f8, f18 + sixteen * f28) < -35);
        // f(-1/tau) = f(tau)
        auto minus_inv = -(BigComplex::from_long(1, kPrec) / tau);
        auto fs = certified(eval_product(weber_f_spec(), minus_inv, {kPrec}), "f");
        CHECK(log10_diff(fs, f) < -35);
    }
}

TEST_CASE("doubling rule reports non-convergence") {
    // Im tau tiny: 1/(q;q) is huge and the truncation cap is hit.
    auto tau = BigComplex::from_rational(0, Rational(1, 100000), kPrec);
    auto e = eval_product(jm(1, -1), tau, {kPrec, 200});
    CHECK(e.truncation <= Frac(200));
    CHECK_FALSE(e.converged);
    CHECK_THROWS_AS(certified(e, "eta"), NonConvergence);
}

TEST_CASE("theta lemmas") {
    auto tau = tau_of("1/7+9/10*i");
    for (int k = 2; k <= 4; ++k)
        for (int j = 0; j <= k; ++j) {
            auto rep = verify_theta_lemma(ThetaLemma::QuarterG, Frac(j), Frac(k), tau, kPrec);
            CHECK(rep.all_converged());
            CHECK(rep.worst_log10() < -25);
            rep = verify_theta_lemma(ThetaLemma::QuarterH, Frac(j), Frac(k), tau, kPrec);
            CHECK(rep.worst_log10() < -25);
        }
    auto rep = verify_theta_lemmas(Frac(1), Frac(3, 2), tau, kPrec);
    CHECK(rep.worst_log10() < -25);
}

TEST_CASE("generalized eta transformation, both signs of c") {
    auto tau = tau_of("1/7+9/10*i");
    const MobiusMap gs[] = {MobiusMap(1, 0, 3, 1), MobiusMap(-1, 0, -3, -1), MobiusMap(2, 1, 5, 3),
                            MobiusMap(1, 0, -2, 1)};
    for (const auto& g : gs)
        for (int N : {2, 3, 5}) {
            auto rep = verify_gen_eta(N, 1, 1, g, tau, kPrec);
            INFO(g.str() << " N=" << N);
            CHECK(rep.worst_log10() < -25);
        }
}

TEST_CASE("generalized eta reduces to eta-quotients") {
    // N = 2, g = 1, h = 0: q^{-1/24} prod (1 - q^{m - 1/2})^2 = (eta(tau/2) / eta(tau))^2
    auto s = gen_dedekind_eta(2, 1, 0, 20);
    EtaQuotientSpec spec{{{Frac(1, 2), 2}, {Frac(1), -2}}};
    auto r = compare_to_order(s, to_ring(eta_quotient(spec, 20), 2), 20);
    CHECK(r.equal);
}

TEST_CASE("lemma cases at tau = i") {
    auto tau = tau_of("i");
    CHECK(verify_theta_lemma(ThetaLemma::QuarterG, Frac(2), Frac(4), tau, kPrec).worst_log10() < -30);
    CHECK(verify_theta_lemma(ThetaLemma::QuarterH, Frac(0), Frac(3), tau, kPrec).worst_log10() < -30);
    CHECK(verify_gen_eta(9, 1, 0, MobiusMap::S(), tau, kPrec).worst_log10() < -25);
}

namespace {

// f(tau + 1) on series: each q^e picks up e^{2 pi i e}. Result over Q(zeta_n).
PuiseuxSeries shift_tau(const PuiseuxSeries& s, int n) {
    PuiseuxSeries out = PuiseuxSeries::zero(Ring{n}, s.trunc());
    for (const auto& [e, c] : s.terms()) {
        const Frac x = e - Frac(e.floor());
        auto z = CycloElement::zeta(static_cast<int>(x.den()), x.num()) * c;
        out = out + to_ring(series_from_term(Ring{z.conductor()}, e, z), n);
    }
    return out;
}

}  // namespace

TEST_CASE("generalized eta rules exact on series") {
    const Frac T(12);
    for (int N : {3, 4, 5})
        for (int g = 1; g < N; ++g)
            for (int h = 0; h < N; ++h) {
                INFO("N=" << N << " g=" << g << " h=" << h);
                // c = 0, b = 1: E_{g,h}(tau + 1) = e^{pi i B(g/N)} E_{g,g+h}(tau)
                const Frac B = bernoulli2(Frac(g, N));
                auto phase = CycloElement::zeta(static_cast<int>((B / Frac(2)).den()),
                                                (B / Frac(2)).num());
                const int n = 12 * N * N;
                auto lhs = shift_tau(gen_dedekind_eta(N, g, h, T), n);
                auto rhs = scale(to_ring(gen_dedekind_eta(N, g, g + h, T), n), phase);
                CHECK(compare_to_order(lhs, rhs, T).equal);
                // E_{g+N,h} = -zeta_N^{-h} E_{g,h}
                auto up = gen_dedekind_eta(N, g + N, h, T);
                auto red = scale(gen_dedekind_eta(N, g, h, T), -CycloElement::zeta(N, -h));
                CHECK(compare_to_order(up, red, T - Frac(1)).equal);
            }
}
