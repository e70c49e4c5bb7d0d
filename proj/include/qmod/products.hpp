// Named product-form series: Pochhammer products, eta quotients, Weber
// functions, generalized Dedekind eta, theta series g/h, J-products, crank.
#pragma once

#include "qmod/series.hpp"

#include <optional>
#include <vector>

namespace qmod {

// (sign * q^a; q^step)_{length}^{power}; sign is +1 for (q^a; q^step) and -1
// for (-q^a; q^step). length = nullopt means infinite.
struct PochFactor {
    Frac a;
    Frac step;
    int sign = 1;
    int power = 1;
    std::optional<std::int64_t> length;
};

// Product of rational Pochhammer factors with positive base exponents,
// known below T. Runs in place on a dense integer lattice.
PuiseuxSeries poch_product(const std::vector<PochFactor>& factors, const Frac& T);

// scalar * q^prefactor * prod(factors).
struct ProductSpec {
    Rational scalar = 1;
    Frac prefactor = 0;
    std::vector<PochFactor> factors;

    PuiseuxSeries build(const Frac& T) const;
    ProductSpec& times(const ProductSpec& o);
    // Spec of the same function at (k * tau), k > 0 rational.
    ProductSpec at_scaled_tau(const Frac& k) const;
};

// Convenience: factors (sign q^{a_i}; q^m)_inf^{power} for each a_i.
ProductSpec pochs(std::initializer_list<std::int64_t> as, std::int64_t m, int sign = 1, int power = 1);
// J_m = (q^m; q^m)_inf raised to power.
ProductSpec jm(std::int64_t m, int power = 1);

struct EtaFactor {
    Frac scale;
    int exponent = 1;
};
struct EtaQuotientSpec {
    std::vector<EtaFactor> factors;
    ProductSpec product() const;
};

PuiseuxSeries eta_series(const Frac& m, const Frac& T);
PuiseuxSeries eta_quotient(const EtaQuotientSpec& spec, const Frac& T);

// f = q^{-1/48} (-q^{1/2}; q), f1 = q^{-1/48} (q^{1/2}; q). The f2 series and
// weber_f2_spec leave out the irrational factor sqrt(2): they give q^{1/24} (-q; q).
PuiseuxSeries weber_f(const Frac& T);
PuiseuxSeries weber_f1(const Frac& T);
PuiseuxSeries weber_f2(const Frac& T);
ProductSpec weber_f_spec();
ProductSpec weber_f1_spec();
ProductSpec weber_f2_spec();

// q^{B(g/N)/2} prod_{m>=1} (1 - zeta_N^h q^{m-1+g/N})(1 - zeta_N^{-h} q^{m-g/N})
// over Q(zeta_N), B(x) = x^2 - x + 1/6.
PuiseuxSeries gen_dedekind_eta(int N, std::int64_t g, std::int64_t h, const Frac& T);
Frac bernoulli2(const Frac& x);

struct ThetaIndex {
    Frac j;
    Frac m;
};

// Sum forms, checked against the triple-product forms.
PuiseuxSeries theta_g(const ThetaIndex& idx, const Frac& T);
PuiseuxSeries theta_h(const ThetaIndex& idx, const Frac& T);
PuiseuxSeries theta_g_sum(const ThetaIndex& idx, const Frac& T);
PuiseuxSeries theta_h_sum(const ThetaIndex& idx, const Frac& T);
PuiseuxSeries theta_g_product(const ThetaIndex& idx, const Frac& T);
PuiseuxSeries theta_h_product(const ThetaIndex& idx, const Frac& T);
// Product form of g_{j,m} as a spec (after reflection into |j| <= m). Returns
// nullopt when the function vanishes identically.
std::optional<ProductSpec> theta_g_spec(const ThetaIndex& idx);
ProductSpec theta_h_spec(const ThetaIndex& idx);

// (q;q)_inf / ((z q; q)_inf (q/z; q)_inf) over the ring of z.
PuiseuxSeries crank_gf(const CycloElement& z, const Frac& T);

// J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_inf, 0 < a < m.
PuiseuxSeries j_product(std::int64_t a, std::int64_t m, const Frac& T);
ProductSpec j_spec(std::int64_t a, std::int64_t m, int power = 1);

}  // namespace qmod
