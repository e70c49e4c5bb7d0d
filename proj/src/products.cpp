#include "qmod/products.hpp"

#include <cmath>
#include <stdexcept>

namespace qmod {

namespace {

void require_finite(const Frac& T, const char* what) {
    if (is_infinite_order(T)) throw std::invalid_argument(std::string(what) + ": needs a finite order");
}

void require_half_integer(const Frac& x, const char* what) {
    if (!(x * Frac(2)).is_integer()) throw std::invalid_argument(std::string(what) + ": expected a half-integer");
}

// j reduced into (-m, m] by steps of 2m; t counts the steps taken.
std::pair<Frac, std::int64_t> reflect_index(const Frac& j, const Frac& m) {
    std::int64_t t = ((j - m) / (Frac(2) * m)).ceil();
    return {j - Frac(2) * m * Frac(t), t};
}

Frac abs(const Frac& x) { return x < Frac(0) ? -x : x; }

}  // namespace

PuiseuxSeries poch_product(const std::vector<PochFactor>& factors, const Frac& T) {
    std::int64_t M = 1;
    for (const auto& f : factors) {
        if (f.a <= Frac(0)) throw std::domain_error("poch_product: base exponents must be positive");
        if (f.step <= Frac(0)) throw std::invalid_argument("poch_product: step must be positive");
        if (f.sign != 1 && f.sign != -1) throw std::invalid_argument("poch_product: sign must be +1 or -1");
        M = lcm64(M, lcm64(f.a.den(), f.step.den()));
    }
    std::int64_t L;
    if (is_infinite_order(T)) {
        std::int64_t top = 0;
        for (const auto& f : factors) {
            if (f.power < 0 || !f.length) throw std::invalid_argument("poch_product: exact result needs finite numerator factors");
            for (std::int64_t k = 0; k < *f.length; ++k) top += f.power * ((f.a + f.step * Frac(k)) * Frac(M)).num();
        }
        L = top + 1;
    } else {
        L = std::max<std::int64_t>(0, (T * Frac(M)).ceil());
    }
    std::vector<BigInt> b(static_cast<std::size_t>(L));
    if (L > 0) b[0] = 1;
    for (const auto& f : factors) {
        const std::int64_t A = (f.a * Frac(M)).num(), S = (f.step * Frac(M)).num();
        const std::int64_t count = f.length ? *f.length : (A >= L ? 0 : (L - A + S - 1) / S);
        for (std::int64_t k = 0; k < count; ++k) {
            const std::int64_t E = A + k * S;
            if (E >= L) break;
            for (int r = 0; r < std::abs(f.power); ++r) {
                if (f.power > 0) {
                    // times (1 - sign q^E)
                    for (std::int64_t i = L - 1; i >= E; --i) {
                        if (f.sign > 0) b[i] -= b[i - E];
                        else b[i] += b[i - E];
                    }
                } else {
                    // divided by (1 - sign q^E)
                    for (std::int64_t i = E; i < L; ++i) {
                        if (f.sign > 0) b[i] += b[i - E];
                        else b[i] -= b[i - E];
                    }
                }
            }
        }
    }
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::int64_t i = 0; i < L; ++i) {
        if (sgn(b[i]) == 0) continue;
        exps.push_back(i);
        nums.push_back(std::move(b[i]));
    }
    return PuiseuxSeries::from_raw(Ring{}, M, std::move(exps), std::move(nums), BigInt(1), T);
}

PuiseuxSeries ProductSpec::build(const Frac& T) const {
    const Frac inner = is_infinite_order(T) ? T : T - prefactor;
    PuiseuxSeries p = poch_product(factors, inner);
    if (prefactor != Frac(0)) p = shift(p, prefactor);
    if (scalar != 1) p = scale(p, scalar);
    return p;
}

ProductSpec& ProductSpec::times(const ProductSpec& o) {
    scalar *= o.scalar;
    prefactor += o.prefactor;
    factors.insert(factors.end(), o.factors.begin(), o.factors.end());
    return *this;
}

ProductSpec ProductSpec::at_scaled_tau(const Frac& k) const {
    if (k <= Frac(0)) throw std::invalid_argument("at_scaled_tau: scale must be positive");
    ProductSpec r = *this;
    r.prefactor *= k;
    for (auto& f : r.factors) {
        f.a *= k;
        f.step *= k;
    }
    return r;
}

ProductSpec pochs(std::initializer_list<std::int64_t> as, std::int64_t m, int sign, int power) {
    ProductSpec r;
    for (auto a : as) r.factors.push_back({Frac(a), Frac(m), sign, power, std::nullopt});
    return r;
}

ProductSpec jm(std::int64_t m, int power) { return pochs({m}, m, 1, power); }

ProductSpec j_spec(std::int64_t a, std::int64_t m, int power) {
    if (!(0 < a && a < m)) throw std::invalid_argument("J_{a,m}: need 0 < a < m");
    return pochs({a, m - a, m}, m, 1, power);
}

ProductSpec EtaQuotientSpec::product() const {
    if (factors.empty()) throw std::invalid_argument("eta quotient: no factors");
    ProductSpec r;
    for (const auto& f : factors) {
        if (f.scale <= Frac(0)) throw std::invalid_argument("eta quotient: scales must be positive");
        r.prefactor += f.scale * Frac(f.exponent, 24);
        if (f.exponent != 0) r.factors.push_back({f.scale, f.scale, 1, f.exponent, std::nullopt});
    }
    return r;
}

PuiseuxSeries eta_series(const Frac& m, const Frac& T) { return eta_quotient({{{m, 1}}}, T); }

PuiseuxSeries eta_quotient(const EtaQuotientSpec& spec, const Frac& T) {
    require_finite(T, "eta_quotient");
    return spec.product().build(T);
}

ProductSpec weber_f_spec() { return {1, Frac(-1, 48), {{Frac(1, 2), 1, -1, 1, std::nullopt}}}; }
ProductSpec weber_f1_spec() { return {1, Frac(-1, 48), {{Frac(1, 2), 1, 1, 1, std::nullopt}}}; }
ProductSpec weber_f2_spec() { return {1, Frac(1, 24), {{Frac(1), 1, -1, 1, std::nullopt}}}; }

PuiseuxSeries weber_f(const Frac& T) { return require_finite(T, "weber_f"), weber_f_spec().build(T); }
PuiseuxSeries weber_f1(const Frac& T) { return require_finite(T, "weber_f1"), weber_f1_spec().build(T); }
PuiseuxSeries weber_f2(const Frac& T) { return require_finite(T, "weber_f2"), weber_f2_spec().build(T); }

Frac bernoulli2(const Frac& x) { return x * x - x + Frac(1, 6); }

PuiseuxSeries gen_dedekind_eta(int N, std::int64_t g, std::int64_t h, const Frac& T) {
    if (N < 1) throw std::invalid_argument("gen_dedekind_eta: N must be positive");
    if (g % N == 0 && h % N == 0) throw std::invalid_argument("gen_dedekind_eta: (g, h) = (0, 0) mod N");
    require_finite(T, "gen_dedekind_eta");
    const Frac x(g, N);
    const Frac c = bernoulli2(x) / Frac(2);
    const Ring ring{N};

    // Factors with exponent <= 0 form an exact finite product; the rest an
    // infinite product known below the order it must supply.
    const std::int64_t r = std::abs(g) / N + 2;
    SeriesLimits lim;
    lim.exponent_floor = Frac(-(r * r / 2 + r + 10));

    struct Piece {
        Frac start;
        CycloElement unit;
    };
    const Piece pieces[2] = {{x, cyclo_embed(h, N)}, {Frac(1) - x, cyclo_embed(-h, N)}};
    PuiseuxSeries finite = PuiseuxSeries::one(ring);
    std::vector<Piece> tails;
    for (const auto& p : pieces) {
        std::int64_t nneg = p.start <= Frac(0) ? (-p.start).floor() + 1 : 0;
        if (nneg > 0) finite = mul(finite, pochhammer(p.start, p.unit, 1, nneg, kExactOrder, lim), lim);
        tails.push_back({p.start + Frac(nneg), p.unit});
    }
    if (finite.is_zero()) return PuiseuxSeries::zero(ring, T);
    const Frac TI = T - c - finite.order();
    PuiseuxSeries out = finite;
    for (const auto& p : tails) out = mul(out, pochhammer(p.start, p.unit, 1, std::nullopt, std::max(TI, Frac(0)), lim), lim);
    out = shift(out, c, lim);
    return truncate(out, T);
}

PuiseuxSeries theta_sum(const ThetaIndex& idx, const Frac& T, bool alternating) {
    require_half_integer(idx.j, "theta");
    require_half_integer(idx.m, "theta");
    if (idx.m <= Frac(0)) throw std::invalid_argument("theta: m must be positive");
    require_finite(T, "theta");
    const Frac& j = idx.j;
    const Frac& m = idx.m;
    // exponent (2mk + j)^2 / 4m
    const Frac four_m = Frac(4) * m;
    const std::int64_t M = lcm64(4, (four_m * Frac(4)).num());
    const double R = std::sqrt(std::max(0.0, (four_m * T).to_double())) + 1.0;
    const double tm = (Frac(2) * m).to_double(), jd = j.to_double();
    const std::int64_t k0 = static_cast<std::int64_t>(std::floor((-R - jd) / tm)) - 1;
    const std::int64_t k1 = static_cast<std::int64_t>(std::ceil((R - jd) / tm)) + 1;
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::int64_t k = k0; k <= k1; ++k) {
        const Frac u = Frac(2) * m * Frac(k) + j;
        const Frac e = u * u / four_m;
        if (e >= T) continue;
        exps.push_back((e * Frac(M)).num());
        nums.emplace_back((alternating && (k & 1)) ? -1 : 1);
    }
    return PuiseuxSeries::from_raw(Ring{}, M, std::move(exps), std::move(nums), BigInt(1), T);
}

PuiseuxSeries theta_g_sum(const ThetaIndex& idx, const Frac& T) { return theta_sum(idx, T, true); }
PuiseuxSeries theta_h_sum(const ThetaIndex& idx, const Frac& T) { return theta_sum(idx, T, false); }

std::optional<ProductSpec> theta_g_spec(const ThetaIndex& idx) {
    require_half_integer(idx.j, "theta");
    require_half_integer(idx.m, "theta");
    if (idx.m <= Frac(0)) throw std::invalid_argument("theta: m must be positive");
    auto [jr, t] = reflect_index(idx.j, idx.m);
    const Frac a = abs(jr), m = idx.m, m2 = Frac(2) * m;
    if (a == m) return std::nullopt;
    ProductSpec s;
    s.scalar = (t & 1) ? -1 : 1;
    s.prefactor = a * a / (Frac(4) * m);
    s.factors = {{m + a, m2, 1, 1, std::nullopt}, {m - a, m2, 1, 1, std::nullopt}, {m2, m2, 1, 1, std::nullopt}};
    return s;
}

ProductSpec theta_h_spec(const ThetaIndex& idx) {
    require_half_integer(idx.j, "theta");
    require_half_integer(idx.m, "theta");
    if (idx.m <= Frac(0)) throw std::invalid_argument("theta: m must be positive");
    const Frac a = abs(reflect_index(idx.j, idx.m).first), m = idx.m, m2 = Frac(2) * m;
    ProductSpec s;
    s.prefactor = a * a / (Frac(4) * m);
    if (a == m) {
        // (-q^0; q^2m)_inf = 2 (-q^2m; q^2m)_inf
        s.scalar = 2;
        s.factors = {{m2, m2, -1, 2, std::nullopt}, {m2, m2, 1, 1, std::nullopt}};
    } else {
        s.factors = {{m - a, m2, -1, 1, std::nullopt}, {m + a, m2, -1, 1, std::nullopt}, {m2, m2, 1, 1, std::nullopt}};
    }
    return s;
}

PuiseuxSeries theta_g_product(const ThetaIndex& idx, const Frac& T) {
    require_finite(T, "theta");
    auto s = theta_g_spec(idx);
    return s ? s->build(T) : PuiseuxSeries::zero(Ring{}, T);
}

PuiseuxSeries theta_h_product(const ThetaIndex& idx, const Frac& T) {
    require_finite(T, "theta");
    return theta_h_spec(idx).build(T);
}

PuiseuxSeries theta_g(const ThetaIndex& idx, const Frac& T) {
    auto s = theta_g_sum(idx, T);
    if (!compare_to_order(s, theta_g_product(idx, T), T).equal)
        throw std::logic_error("theta_g: sum and product forms disagree for j=" + idx.j.str() + ", m=" + idx.m.str());
    return s;
}

PuiseuxSeries theta_h(const ThetaIndex& idx, const Frac& T) {
    auto s = theta_h_sum(idx, T);
    if (!compare_to_order(s, theta_h_product(idx, T), T).equal)
        throw std::logic_error("theta_h: sum and product forms disagree for j=" + idx.j.str() + ", m=" + idx.m.str());
    return s;
}

PuiseuxSeries crank_gf(const CycloElement& z, const Frac& T) {
    require_finite(T, "crank_gf");
    if (z.is_zero()) throw std::invalid_argument("crank_gf: z must be a root of unity");
    const int n = z.conductor();
    auto num = to_ring(pochhammer(1, std::nullopt, 1, std::nullopt, T), n);
    auto d1 = pochhammer(1, z, 1, std::nullopt, T);
    auto d2 = pochhammer(1, z.inverse(), 1, std::nullopt, T);
    return mul(num, invert(mul(d1, d2)));
}

PuiseuxSeries j_product(std::int64_t a, std::int64_t m, const Frac& T) {
    require_finite(T, "j_product");
    return j_spec(a, m).build(T);
}

}  // namespace qmod
