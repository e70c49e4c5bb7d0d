#include "qmod/series.hpp"

#include "qmod/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qmod {

namespace {

std::int64_t scaled_exponent(const Frac& e, std::int64_t M) {
    Frac s = e * Frac(M);
    if (!s.is_integer()) throw std::logic_error("exponent not on lattice");
    return s.num();
}

Frac add_order(const Frac& t, const Frac& o) {
    if (is_infinite_order(t) || is_infinite_order(o)) return kExactOrder;
    Frac r = t + o;
    return is_infinite_order(r) ? kExactOrder : r;
}

Frac min_order(const Frac& a, const Frac& b) { return a < b ? a : b; }

void require_same_ring(const PuiseuxSeries& a, const PuiseuxSeries& b, const char* op) {
    if (!(a.ring() == b.ring()))
        throw std::invalid_argument(std::string(op) + ": ring mismatch (" + a.ring().str() + " vs " + b.ring().str() + ")");
}

void check_floor(const PuiseuxSeries& s, const SeriesLimits& lim) {
    if (!s.is_zero() && s.exponent(0) < lim.exponent_floor)
        throw std::range_error("series exponent " + s.exponent(0).str() + " below floor " + lim.exponent_floor.str());
}

// Splits a cyclotomic element into integer coefficients over a common denominator.
void integer_form(const CycloElement& c, std::vector<BigInt>& num, BigInt& den) {
    den = 1;
    for (const auto& x : c.coeffs()) den = lcm(den, BigInt(x.get_den()));
    num.resize(c.coeffs().size());
    for (std::size_t i = 0; i < num.size(); ++i) num[i] = c.coeffs()[i].get_num() * (den / c.coeffs()[i].get_den());
}

// out (width phi) = reduce(x * y) for integer blocks.
void block_mul_reduce(const CycloField& F, const BigInt* x, const BigInt* y, BigInt* out) {
    const int phi = F.phi;
    if (phi == 1) {
        out[0] = x[0] * y[0];
        return;
    }
    std::vector<BigInt> prod(2 * phi - 1);
    for (int u = 0; u < phi; ++u) {
        if (sgn(x[u]) == 0) continue;
        for (int v = 0; v < phi; ++v)
            if (sgn(y[v]) != 0) mpz_addmul(prod[u + v].get_mpz_t(), x[u].get_mpz_t(), y[v].get_mpz_t());
    }
    for (int j = 0; j < phi; ++j) out[j] = 0;
    reduce_into(F, prod, out);
}

bool block_is_zero(const BigInt* x, int w) {
    for (int i = 0; i < w; ++i)
        if (sgn(x[i]) != 0) return false;
    return true;
}

}  // namespace

PuiseuxSeries::PuiseuxSeries() = default;

PuiseuxSeries PuiseuxSeries::zero(Ring ring, Frac trunc) {
    return from_raw(ring, 1, {}, {}, BigInt(1), trunc);
}

PuiseuxSeries PuiseuxSeries::one(Ring ring) { return term(ring, Frac(0), CycloElement::integer(1, ring.conductor)); }

PuiseuxSeries PuiseuxSeries::term(Ring ring, Frac exponent, const CycloElement& coeff) {
    CycloElement c = coeff.lift(ring.conductor);
    std::vector<BigInt> num;
    BigInt den;
    integer_form(c, num, den);
    return from_raw(ring, exponent.den(), {exponent.num()}, std::move(num), den, kExactOrder);
}

PuiseuxSeries series_from_term(Ring ring, const Frac& exponent, const CycloElement& coeff) {
    return PuiseuxSeries::term(ring, exponent, coeff);
}

PuiseuxSeries PuiseuxSeries::from_raw(Ring ring, std::int64_t M, std::vector<std::int64_t> exps, std::vector<BigInt> nums,
                                      BigInt den, Frac trunc) {
    PuiseuxSeries s;
    s.ring_ = ring;
    s.phi_ = cyclo_field(ring.conductor).phi;
    const int w = s.phi_;
    if (M <= 0) throw std::invalid_argument("exponent denominator must be positive");
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator");
    if (nums.size() != exps.size() * static_cast<std::size_t>(w)) throw std::invalid_argument("from_raw: size mismatch");
    if (sgn(den) < 0) {
        den = -den;
        for (auto& x : nums) x = -x;
    }
    s.trunc_ = is_infinite_order(trunc) ? kExactOrder : trunc;

    bool sorted = true;
    for (std::size_t i = 1; i < exps.size(); ++i)
        if (exps[i] <= exps[i - 1]) { sorted = false; break; }
    if (!sorted) {
        std::vector<std::size_t> perm(exps.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return exps[a] < exps[b]; });
        std::vector<std::int64_t> e2;
        std::vector<BigInt> n2;
        for (std::size_t p : perm) {
            if (!e2.empty() && e2.back() == exps[p]) {
                for (int j = 0; j < w; ++j) n2[n2.size() - w + j] += nums[p * w + j];
            } else {
                e2.push_back(exps[p]);
                for (int j = 0; j < w; ++j) n2.push_back(std::move(nums[p * w + j]));
            }
        }
        exps = std::move(e2);
        nums = std::move(n2);
    }

    // Drop zeros and anything at or beyond the truncation order.
    std::int64_t limit = 0;
    bool has_limit = !s.is_exact();
    if (has_limit) limit = (s.trunc_ * Frac(M)).ceil();
    std::size_t out = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (has_limit && exps[i] >= limit) break;
        if (block_is_zero(&nums[i * w], w)) continue;
        if (out != i) {
            exps[out] = exps[i];
            for (int j = 0; j < w; ++j) nums[out * w + j] = std::move(nums[i * w + j]);
        }
        ++out;
    }
    exps.resize(out);
    nums.resize(out * w);

    if (exps.empty()) {
        s.M_ = 1;
        s.den_ = 1;
        return s;
    }
    // Content normalization.
    BigInt g = den;
    for (const auto& x : nums) {
        if (g == 1) break;
        if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g != 1) {
        den /= g;
        for (auto& x : nums)
            if (sgn(x) != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
    // Minimal exponent denominator.
    std::int64_t gm = M;
    for (auto e : exps) {
        if (gm == 1) break;
        gm = std::gcd(gm, e);
    }
    if (gm > 1) {
        M /= gm;
        for (auto& e : exps) e /= gm;
    }
    s.M_ = M;
    s.exps_ = std::move(exps);
    s.nums_ = std::move(nums);
    s.den_ = std::move(den);
    return s;
}

CycloElement PuiseuxSeries::coeff_at(std::size_t i) const {
    std::vector<Rational> c(phi_);
    for (int j = 0; j < phi_; ++j) {
        c[j] = Rational(nums_[i * phi_ + j], den_);
        c[j].canonicalize();
    }
    return CycloElement(ring_.conductor, std::move(c));
}

CycloElement PuiseuxSeries::coeff(const Frac& e) const {
    if (e >= trunc_) throw std::out_of_range("coefficient of q^" + e.str() + " is beyond the truncation order " + trunc_.str());
    Frac s = e * Frac(M_);
    if (!s.is_integer()) return CycloElement(ring_.conductor);
    auto it = std::lower_bound(exps_.begin(), exps_.end(), s.num());
    if (it == exps_.end() || *it != s.num()) return CycloElement(ring_.conductor);
    return coeff_at(static_cast<std::size_t>(it - exps_.begin()));
}

Frac PuiseuxSeries::order() const { return exps_.empty() ? trunc_ : Frac(exps_.front(), M_); }

std::vector<std::pair<Frac, CycloElement>> PuiseuxSeries::terms() const {
    std::vector<std::pair<Frac, CycloElement>> out;
    out.reserve(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i) out.emplace_back(exponent(i), coeff_at(i));
    return out;
}

bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    return a.ring_ == b.ring_ && a.M_ == b.M_ && a.trunc_ == b.trunc_ && a.exps_ == b.exps_ && a.den_ == b.den_ &&
           a.nums_ == b.nums_;
}

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    require_same_ring(a, b, "add");
    const int w = a.phi();
    const std::int64_t M = lcm64(a.exp_den(), b.exp_den());
    const std::int64_t ra = M / a.exp_den(), rb = M / b.exp_den();
    const BigInt D = lcm(a.raw_den(), b.raw_den());
    const BigInt fa = D / a.raw_den(), fb = D / b.raw_den();
    const auto& ea = a.raw_exps();
    const auto& eb = b.raw_exps();
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    exps.reserve(ea.size() + eb.size());
    nums.reserve((ea.size() + eb.size()) * w);
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        std::int64_t xa = i < ea.size() ? ea[i] * ra : INT64_MAX;
        std::int64_t xb = j < eb.size() ? eb[j] * rb : INT64_MAX;
        if (xa < xb) {
            exps.push_back(xa);
            for (int t = 0; t < w; ++t) nums.push_back(a.raw_nums()[i * w + t] * fa);
            ++i;
        } else if (xb < xa) {
            exps.push_back(xb);
            for (int t = 0; t < w; ++t) nums.push_back(b.raw_nums()[j * w + t] * fb);
            ++j;
        } else {
            exps.push_back(xa);
            for (int t = 0; t < w; ++t) nums.push_back(a.raw_nums()[i * w + t] * fa + b.raw_nums()[j * w + t] * fb);
            ++i;
            ++j;
        }
    }
    return PuiseuxSeries::from_raw(a.ring(), M, std::move(exps), std::move(nums), D, min_order(a.trunc(), b.trunc()));
}

PuiseuxSeries neg(const PuiseuxSeries& a) {
    std::vector<BigInt> nums = a.raw_nums();
    for (auto& x : nums) x = -x;
    return PuiseuxSeries::from_raw(a.ring(), a.exp_den(), a.raw_exps(), std::move(nums), a.raw_den(), a.trunc());
}

PuiseuxSeries sub(const PuiseuxSeries& a, const PuiseuxSeries& b) { return add(a, neg(b)); }

PuiseuxSeries scale(const PuiseuxSeries& a, const CycloElement& c0) {
    const int n = a.ring().conductor;
    if (n % c0.conductor() != 0)
        throw std::invalid_argument("scale: constant in Q(zeta_" + std::to_string(c0.conductor()) + ") is not in " + a.ring().str());
    CycloElement c = c0.lift(n);
    std::vector<BigInt> cn;
    BigInt cd;
    integer_form(c, cn, cd);
    const auto& F = cyclo_field(n);
    const int w = a.phi();
    std::vector<BigInt> nums(a.raw_nums().size());
    for (std::size_t i = 0; i < a.size(); ++i) block_mul_reduce(F, &a.raw_nums()[i * w], cn.data(), &nums[i * w]);
    return PuiseuxSeries::from_raw(a.ring(), a.exp_den(), a.raw_exps(), std::move(nums), a.raw_den() * cd, a.trunc());
}

PuiseuxSeries scale(const PuiseuxSeries& a, const Rational& c) {
    return scale(a, CycloElement::rational(c, a.ring().conductor));
}

PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b, const SeriesLimits& lim) {
    require_same_ring(a, b, "mul");
    const Frac T = min_order(add_order(a.trunc(), b.order()), add_order(b.trunc(), a.order()));
    if (a.is_zero() || b.is_zero()) return PuiseuxSeries::zero(a.ring(), T);
    const int w = a.phi();
    const std::int64_t M = lcm64(a.exp_den(), b.exp_den());
    const std::int64_t ra = M / a.exp_den(), rb = M / b.exp_den();
    std::vector<std::int64_t> ea(a.size()), eb(b.size());
    for (std::size_t i = 0; i < ea.size(); ++i) ea[i] = a.raw_exps()[i] * ra;
    for (std::size_t i = 0; i < eb.size(); ++i) eb[i] = b.raw_exps()[i] * rb;
    const std::int64_t base = ea.front() + eb.front();
    std::int64_t g = 0;
    for (auto e : ea) g = std::gcd(g, e - ea.front());
    for (auto e : eb) g = std::gcd(g, e - eb.front());
    if (g == 0) g = 1;
    std::int64_t L = (ea.back() + eb.back() - base) / g + 1;
    if (!is_infinite_order(T)) {
        std::int64_t limit = (T * Frac(M)).ceil();
        if (limit <= base) return PuiseuxSeries::zero(a.ring(), T);
        L = std::min(L, (limit - base + g - 1) / g);
    }
    const std::int64_t a0 = ea.front(), b0 = eb.front();
    for (auto& e : ea) e = (e - a0) / g;
    for (auto& e : eb) e = (e - b0) / g;
    const int ow = 2 * w - 1;
    std::vector<BigInt> acc(static_cast<std::size_t>(L) * ow);
    kernels::SparseOperand A{ea.data(), a.raw_nums().data(), ea.size(), w};
    kernels::SparseOperand B{eb.data(), b.raw_nums().data(), eb.size(), w};
    kernels::convolve(A, B, L, acc);

    const auto& F = cyclo_field(a.ring().conductor);
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::int64_t s = 0; s < L; ++s) {
        BigInt* blk = &acc[static_cast<std::size_t>(s) * ow];
        if (block_is_zero(blk, ow)) continue;
        exps.push_back(base + s * g);
        if (w == 1) {
            nums.push_back(std::move(blk[0]));
        } else {
            std::size_t off = nums.size();
            nums.resize(off + w);
            for (int j = 0; j < w; ++j) nums[off + j] = blk[j];
            for (int t = w; t < ow; ++t) {
                if (sgn(blk[t]) == 0) continue;
                const auto& pw = F.power[t % F.n];
                for (int j = 0; j < w; ++j)
                    if (pw[j] != 0) nums[off + j] += blk[t] * pw[j];
            }
        }
    }
    auto r = PuiseuxSeries::from_raw(a.ring(), M, std::move(exps), std::move(nums), a.raw_den() * b.raw_den(), T);
    check_floor(r, lim);
    return r;
}

namespace {

// Inverse of a series whose leading term is exactly 1 at exponent 0, with
// integer coefficients; L slots on stride g.
std::vector<BigInt> invert_unit_integer(const CycloField& F, const std::vector<std::int64_t>& idx,
                                        const std::vector<BigInt>& U, std::int64_t L) {
    const int w = F.phi;
    const int ow = 2 * w - 1;
    std::vector<BigInt> W(static_cast<std::size_t>(L) * w);
    W[0] = 1;
    std::vector<BigInt> acc(ow);
    for (std::int64_t s = 1; s < L; ++s) {
        for (auto& x : acc) x = 0;
        for (std::size_t t = 1; t < idx.size(); ++t) {
            if (idx[t] > s) break;
            const BigInt* u = &U[t * w];
            const BigInt* x = &W[static_cast<std::size_t>(s - idx[t]) * w];
            if (w == 1) {
                mpz_addmul(acc[0].get_mpz_t(), u[0].get_mpz_t(), x[0].get_mpz_t());
                continue;
            }
            for (int p = 0; p < w; ++p) {
                if (sgn(u[p]) == 0) continue;
                for (int q = 0; q < w; ++q)
                    if (sgn(x[q]) != 0) mpz_addmul(acc[p + q].get_mpz_t(), u[p].get_mpz_t(), x[q].get_mpz_t());
            }
        }
        BigInt* out = &W[static_cast<std::size_t>(s) * w];
        for (int j = 0; j < w; ++j) out[j] = -acc[j];
        for (int t = w; t < ow; ++t) {
            if (sgn(acc[t]) == 0) continue;
            const auto& pw = F.power[t % F.n];
            for (int j = 0; j < w; ++j)
                if (pw[j] != 0) out[j] -= acc[t] * pw[j];
        }
    }
    return W;
}

}  // namespace

PuiseuxSeries invert(const PuiseuxSeries& a, std::optional<Frac> order, const SeriesLimits& lim) {
    if (a.is_zero()) throw std::domain_error("invert: zero series");
    const Frac v = a.order();
    const CycloElement lead = a.coeff_at(0);
    const CycloElement lead_inv = lead.inverse();
    Frac T;
    if (a.is_exact()) {
        if (a.size() == 1) {
            auto r = PuiseuxSeries::term(a.ring(), -v, lead_inv);
            if (order) r = truncate(r, *order);
            check_floor(r, lim);
            return r;
        }
        if (!order) throw std::invalid_argument("invert: exact multi-term series needs an explicit order");
        T = *order;
    } else {
        T = a.trunc() - v - v;
        if (order) T = min_order(T, *order);
    }
    // u = a / (lead q^v), constant term 1.
    const std::int64_t M = a.exp_den();
    const int w = a.phi();
    const auto& F = cyclo_field(a.ring().conductor);
    std::vector<std::int64_t> rel(a.size());
    std::int64_t g = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        rel[i] = a.raw_exps()[i] - a.raw_exps()[0];
        g = std::gcd(g, rel[i]);
    }
    if (g == 0) g = 1;
    for (auto& r : rel) r /= g;
    Frac X = (T + v) * Frac(M) / Frac(g);
    std::int64_t L = X.ceil();
    if (L <= 0) return PuiseuxSeries::zero(a.ring(), T);

    PuiseuxSeries u = scale(a, lead_inv);  // now the leading coefficient is 1
    const BigInt& D = u.raw_den();
    std::vector<std::int64_t> wexps;
    std::vector<BigInt> wnums;
    if (D == 1) {
        auto W = invert_unit_integer(F, rel, u.raw_nums(), L);
        for (std::int64_t s = 0; s < L; ++s) {
            if (block_is_zero(&W[static_cast<std::size_t>(s) * w], w)) continue;
            wexps.push_back(s * g);
            for (int j = 0; j < w; ++j) wnums.push_back(std::move(W[static_cast<std::size_t>(s) * w + j]));
        }
        auto inv_u = PuiseuxSeries::from_raw(a.ring(), M, std::move(wexps), std::move(wnums), BigInt(1), add_order(T, v));
        auto r = scale(shift(inv_u, -v, lim), lead_inv);
        check_floor(r, lim);
        return r;
    }
    // General denominators: exact rational recurrence on cyclotomic elements.
    std::vector<CycloElement> ut(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ut[i] = u.coeff_at(i);
    std::vector<CycloElement> W(static_cast<std::size_t>(L), CycloElement(a.ring().conductor));
    W[0] = CycloElement::integer(1, a.ring().conductor);
    for (std::int64_t s = 1; s < L; ++s) {
        CycloElement acc(a.ring().conductor);
        for (std::size_t t = 1; t < rel.size() && rel[t] <= s; ++t) acc += ut[t] * W[static_cast<std::size_t>(s - rel[t])];
        W[static_cast<std::size_t>(s)] = -acc;
    }
    PuiseuxSeries inv_u = PuiseuxSeries::zero(a.ring(), add_order(T, v));
    for (std::int64_t s = 0; s < L; ++s)
        if (!W[static_cast<std::size_t>(s)].is_zero())
            inv_u = add(inv_u, PuiseuxSeries::term(a.ring(), Frac(s * g, M), W[static_cast<std::size_t>(s)]));
    auto r = scale(shift(inv_u, -v, lim), lead_inv);
    check_floor(r, lim);
    return r;
}

PuiseuxSeries pow(const PuiseuxSeries& a, long e, std::optional<Frac> order, const SeriesLimits& lim) {
    if (e < 0) return pow(invert(a, order, lim), -e, order, lim);
    PuiseuxSeries result = PuiseuxSeries::one(a.ring());
    PuiseuxSeries base = a;
    if (order) base = truncate(base, *order);
    while (e > 0) {
        if (e & 1) result = mul(result, base, lim);
        e >>= 1;
        if (e) base = mul(base, base, lim);
        if (order) {
            result = truncate(result, *order);
            base = truncate(base, *order);
        }
    }
    return result;
}

PuiseuxSeries substitute_q_power(const PuiseuxSeries& a, std::int64_t k) {
    if (k <= 0) throw std::invalid_argument("substitute_q_power: k must be positive");
    std::vector<std::int64_t> exps = a.raw_exps();
    for (auto& e : exps) e = detail::checked_mul(e, k);
    Frac T = a.is_exact() ? kExactOrder : a.trunc() * Frac(k);
    return PuiseuxSeries::from_raw(a.ring(), a.exp_den(), std::move(exps), a.raw_nums(), a.raw_den(), T);
}

PuiseuxSeries truncate(const PuiseuxSeries& a, const Frac& T) {
    if (T >= a.trunc()) return a;
    return PuiseuxSeries::from_raw(a.ring(), a.exp_den(), a.raw_exps(), a.raw_nums(), a.raw_den(), T);
}

PuiseuxSeries shift(const PuiseuxSeries& a, const Frac& e, const SeriesLimits& lim) {
    const std::int64_t M = lcm64(a.exp_den(), e.den());
    const std::int64_t r = M / a.exp_den();
    const std::int64_t s = scaled_exponent(e, M);
    std::vector<std::int64_t> exps = a.raw_exps();
    for (auto& x : exps) x = x * r + s;
    auto out = PuiseuxSeries::from_raw(a.ring(), M, std::move(exps), a.raw_nums(), a.raw_den(), add_order(a.trunc(), e));
    check_floor(out, lim);
    return out;
}

PuiseuxSeries to_ring(const PuiseuxSeries& a, int n) {
    const int m = a.ring().conductor;
    if (m == n) return a;
    if (n % m != 0) throw std::invalid_argument("to_ring: " + a.ring().str() + " does not embed in Q(zeta_" + std::to_string(n) + ")");
    const auto& G = cyclo_field(n);
    const std::int64_t step = n / m;
    const int w = a.phi();
    std::vector<BigInt> nums(a.size() * G.phi);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int t = 0; t < w; ++t) {
            const BigInt& x = a.raw_nums()[i * w + t];
            if (sgn(x) == 0) continue;
            const auto& pw = G.power[(t * step) % n];
            for (int j = 0; j < G.phi; ++j)
                if (pw[j] != 0) nums[i * G.phi + j] += x * pw[j];
        }
    return PuiseuxSeries::from_raw(Ring{n}, a.exp_den(), a.raw_exps(), std::move(nums), a.raw_den(), a.trunc());
}

PuiseuxSeries residue_part(const PuiseuxSeries& a, const Frac& m, const Frac& r) {
    if (m <= Frac(0)) throw std::invalid_argument("residue_part: modulus must be positive");
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    const int w = a.phi();
    for (std::size_t i = 0; i < a.size(); ++i) {
        Frac q = (a.exponent(i) - r) / m;
        if (!q.is_integer()) continue;
        exps.push_back(a.raw_exps()[i]);
        for (int j = 0; j < w; ++j) nums.push_back(a.raw_nums()[i * w + j]);
    }
    return PuiseuxSeries::from_raw(a.ring(), a.exp_den(), std::move(exps), std::move(nums), a.raw_den(), a.trunc());
}

PuiseuxSeries pochhammer(const Frac& a, const std::optional<CycloElement>& unit_root, const Frac& step,
                         std::optional<std::int64_t> n, const Frac& T, const SeriesLimits& lim) {
    if (step <= Frac(0)) throw std::invalid_argument("pochhammer: step must be positive");
    const CycloElement u = unit_root ? *unit_root : CycloElement::integer(1);
    const Ring ring{u.conductor()};
    if (n && *n < 0) throw std::invalid_argument("pochhammer: negative length");
    const bool infinite_T = is_infinite_order(T);
    if (!n) {
        if (a <= Frac(0)) throw std::domain_error("pochhammer: infinite product with a nonpositive-exponent factor");
        if (infinite_T) throw std::invalid_argument("pochhammer: infinite product needs a finite order");
    }
    if (n && *n == 0) return truncate(PuiseuxSeries::one(ring), T);

    const std::int64_t M = lcm64(a.den(), step.den());
    const std::int64_t as = scaled_exponent(a, M), ss = scaled_exponent(step, M);
    std::int64_t K;
    if (n) {
        K = *n;
    } else {
        K = a >= T ? 0 : ((T - a) / step).ceil();
    }
    if (K == 0) return truncate(PuiseuxSeries::one(ring), T);
    std::int64_t g = K >= 2 ? std::gcd(as, ss) : std::abs(as);
    if (g == 0) g = 1;
    std::int64_t neg_sum = 0, pos_sum = 0;
    for (std::int64_t k = 0; k < K; ++k) {
        std::int64_t e = as + k * ss;
        if (e < 0) neg_sum += e;
        else pos_sum += e;
    }
    std::int64_t top = pos_sum + 1;
    if (!infinite_T) top = std::min(top, (T * Frac(M)).ceil() - neg_sum);
    const std::int64_t low = neg_sum;
    if (top <= low) return PuiseuxSeries::zero(ring, T);
    const std::int64_t L = (top - low + g - 1) / g;

    const auto& F = cyclo_field(ring.conductor);
    const int w = F.phi;
    std::vector<BigInt> un;
    BigInt ud;
    integer_form(u, un, ud);
    const bool u_int = ud == 1 && u.is_rational();
    const BigInt u0 = un[0];

    std::vector<BigInt> P(static_cast<std::size_t>(L) * w);
    P[static_cast<std::size_t>((0 - low) / g) * w] = 1;
    std::vector<BigInt> tmp(w);
    BigInt den = 1;
    for (std::int64_t k = 0; k < K; ++k) {
        const std::int64_t e = as + k * ss;
        const std::int64_t d = e / g;
        if (d >= L) continue;  // shifts everything past the window
        auto update = [&](std::int64_t i) {
            // P[i] = ud*P[i] - u*P[i-d]
            BigInt* pi = &P[static_cast<std::size_t>(i) * w];
            const std::int64_t j = i - d;
            const bool has_src = j >= 0 && j < L;
            if (u_int) {
                if (has_src) {
                    const BigInt* pj = &P[static_cast<std::size_t>(j) * w];
                    for (int t = 0; t < w; ++t)
                        if (sgn(pj[t]) != 0) mpz_submul(pi[t].get_mpz_t(), u0.get_mpz_t(), pj[t].get_mpz_t());
                }
                return;
            }
            if (has_src && !block_is_zero(&P[static_cast<std::size_t>(j) * w], w)) {
                block_mul_reduce(F, &P[static_cast<std::size_t>(j) * w], un.data(), tmp.data());
                for (int t = 0; t < w; ++t) pi[t] = pi[t] * ud - tmp[t];
            } else if (ud != 1) {
                for (int t = 0; t < w; ++t) pi[t] *= ud;
            }
        };
        if (d > 0) {
            for (std::int64_t i = L - 1; i >= 0; --i) update(i);
        } else if (d < 0) {
            for (std::int64_t i = 0; i < L; ++i) update(i);
        } else {
            // (1 - u) times everything.
            for (std::int64_t i = 0; i < L; ++i) {
                BigInt* pi = &P[static_cast<std::size_t>(i) * w];
                if (block_is_zero(pi, w)) continue;
                block_mul_reduce(F, pi, un.data(), tmp.data());
                for (int t = 0; t < w; ++t) pi[t] = pi[t] * ud - tmp[t];
            }
        }
        if (!u_int) den *= ud;
    }
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::int64_t i = 0; i < L; ++i) {
        const BigInt* pi = &P[static_cast<std::size_t>(i) * w];
        if (block_is_zero(pi, w)) continue;
        exps.push_back(low + i * g);
        for (int t = 0; t < w; ++t) nums.push_back(pi[t]);
    }
    Frac Tr = (n && infinite_T) ? kExactOrder : T;
    auto r = PuiseuxSeries::from_raw(ring, M, std::move(exps), std::move(nums), den, Tr);
    check_floor(r, lim);
    return r;
}

CompareResult compare_to_order(const PuiseuxSeries& a, const PuiseuxSeries& b, const Frac& T) {
    require_same_ring(a, b, "compare_to_order");
    if (T > a.trunc() || T > b.trunc())
        throw std::invalid_argument("compare_to_order: order " + T.str() + " exceeds a truncation order (" + a.trunc().str() +
                                    ", " + b.trunc().str() + ")");
    const int w = a.phi();
    const std::int64_t M = lcm64(a.exp_den(), b.exp_den());
    const std::int64_t ra = M / a.exp_den(), rb = M / b.exp_den();
    const auto& ea = a.raw_exps();
    const auto& eb = b.raw_exps();
    std::size_t i = 0, j = 0;
    CompareResult res;
    while (i < ea.size() || j < eb.size()) {
        std::int64_t xa = i < ea.size() ? ea[i] * ra : INT64_MAX;
        std::int64_t xb = j < eb.size() ? eb[j] * rb : INT64_MAX;
        std::int64_t x = std::min(xa, xb);
        Frac e(x, M);
        if (e >= T) break;
        bool differ;
        if (xa != xb) {
            differ = true;
        } else {
            differ = false;
            for (int t = 0; t < w && !differ; ++t)
                differ = a.raw_nums()[i * w + t] * b.raw_den() != b.raw_nums()[j * w + t] * a.raw_den();
        }
        if (differ) {
            res.equal = false;
            res.exponent = e;
            res.left = a.coeff(e);
            res.right = b.coeff(e);
            return res;
        }
        if (xa == x) ++i;
        if (xb == x) ++j;
    }
    return res;
}

std::string format_terms(const PuiseuxSeries& s) {
    std::ostringstream os;
    for (const auto& [e, c] : s.terms()) os << e.str() << ": " << c.str() << "\n";
    if (!s.is_exact()) os << "+ O(q^" << s.trunc().str() << ")\n";
    return os.str();
}

}  // namespace qmod
