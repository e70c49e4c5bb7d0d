#include "qmod/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qmod {

// BigFloat ------------------------------------------------------------------

BigFloat::BigFloat(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}
BigFloat::BigFloat(long v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, v, MPFR_RNDN);
}
BigFloat::BigFloat(const Rational& v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}
BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}
BigFloat::BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, o.prec());
    mpfr_swap(v_, o.v_);
}
BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}
BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

double BigFloat::log2_abs() const {
    if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
    long e;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

std::string BigFloat::str(int digits) const {
    char buf[256];
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v_);
    return buf;
}

namespace {
mpfr_prec_t pmin(const BigFloat& a, const BigFloat& b) { return std::min(a.prec(), b.prec()); }
}  // namespace

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmin(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmin(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmin(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(pmin(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
BigFloat operator-(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

BigFloat sqrt(const BigFloat& x) {
    BigFloat r(x.prec());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}
BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
BigFloat pow2(long e, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
    return r;
}

// BigComplex ----------------------------------------------------------------

BigComplex BigComplex::from_rational(const Rational& r, const Rational& i, mpfr_prec_t prec) {
    return {BigFloat(r, prec), BigFloat(i, prec)};
}

BigFloat BigComplex::norm() const { return re * re + im * im; }

BigFloat BigComplex::abs() const {
    BigFloat r(prec());
    mpfr_hypot(r.get(), re.get(), im.get(), MPFR_RNDN);
    return r;
}

std::string BigComplex::str(int digits) const {
    std::string s = re.str(digits);
    std::string t = im.str(digits);
    if (t.empty() || t[0] != '-') t = "+" + t;
    return s + t + "*i";
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
BigComplex operator-(const BigComplex& a) { return {-a.re, -a.im}; }
BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigComplex operator*(const BigFloat& a, const BigComplex& b) { return {a * b.re, a * b.im}; }
BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.norm();
    if (n.is_zero()) throw std::domain_error("BigComplex: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

BigComplex exp(const BigComplex& z) {
    const mpfr_prec_t p = z.prec();
    BigFloat m(p), c(p), s(p);
    mpfr_exp(m.get(), z.re.get(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
    return {m * c, m * s};
}

BigComplex sqrt_principal(const BigComplex& z) {
    if (z.is_zero()) throw std::domain_error("sqrt_principal: zero argument");
    const mpfr_prec_t p = z.prec();
    BigFloat r = z.abs();
    // sqrt((|z| + x)/2) + i sign(y) sqrt((|z| - x)/2); y = 0, x < 0 gives +i.
    BigFloat two(2, p);
    BigFloat a = sqrt((r + z.re) / two);
    BigFloat b = sqrt((r - z.re) / two);
    if (z.im.sign() < 0) b = -b;
    return {a, b};
}

BigComplex pow(const BigComplex& z, long n) {
    const mpfr_prec_t p = z.prec();
    BigComplex base = z;
    if (n < 0) {
        base = BigComplex::from_long(1, p) / z;
        n = -n;
    }
    BigComplex r = BigComplex::from_long(1, p);
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

BigComplex exp_pi_i(const Frac& x, mpfr_prec_t prec) {
    // reduce x modulo 2 exactly first
    std::int64_t d2 = 2 * x.den();
    std::int64_t n = ((x.num() % d2) + d2) % d2;
    BigFloat ang = BigFloat::pi(prec) * BigFloat(Rational(n, x.den()), prec);
    BigFloat c(prec), s(prec);
    mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
    return {c, s};
}

BigComplex q_power(const BigComplex& tau, const Frac& x) {
    const mpfr_prec_t p = tau.prec();
    BigFloat twopi = BigFloat(2, p) * BigFloat::pi(p);
    BigFloat xf(Rational(x.num(), x.den()), p);
    // 2 pi i tau x = 2 pi x (-Im tau + i Re tau)
    BigFloat f = twopi * xf;
    return exp(BigComplex(-(f * tau.im), f * tau.re));
}

BigComplex embed(const CycloElement& c, mpfr_prec_t prec) {
    const int n = c.conductor();
    BigComplex r(prec);
    const auto& co = c.coeffs();
    for (std::size_t k = 0; k < co.size(); ++k) {
        if (co[k] == 0) continue;
        BigComplex z = exp_pi_i(Frac(2 * static_cast<std::int64_t>(k), n), prec);
        r += BigFloat(co[k], prec) * z;
    }
    return r;
}

// tau parsing ---------------------------------------------------------------

RationalTau parse_tau_exact(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty tau");
    RationalTau out{0, 0};
    // split into signed terms
    std::size_t pos = 0;
    bool any = false;
    while (pos < s.size()) {
        std::size_t start = pos;
        if (s[pos] == '+' || s[pos] == '-') ++pos;
        while (pos < s.size() && s[pos] != '+' && s[pos] != '-') ++pos;
        std::string term = s.substr(start, pos - start);
        bool neg = false;
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            neg = term[0] == '-';
            term = term.substr(1);
        }
        if (term.empty()) throw std::invalid_argument("malformed tau: " + text);
        bool imag = false;
        if (term.back() == 'i') {
            imag = true;
            term.pop_back();
            if (!term.empty() && term.back() == '*') term.pop_back();
            if (term.empty()) term = "1";
        }
        Rational v;
        try {
            v = parse_rational(term);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed tau: " + text);
        }
        if (neg) v = -v;
        (imag ? out.im : out.re) += v;
        any = true;
    }
    if (!any) throw std::invalid_argument("malformed tau: " + text);
    if (out.im <= 0) throw std::invalid_argument("tau must lie in the upper half-plane: " + text);
    return out;
}

BigComplex parse_tau(const std::string& text, mpfr_prec_t prec) {
    auto t = parse_tau_exact(text);
    return BigComplex::from_rational(t.re, t.im, prec);
}

// Mobius maps ---------------------------------------------------------------

MobiusMap::MobiusMap(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_) : a(a_), b(b_), c(c_), d(d_) {
    if (a * d - b * c != 1) throw std::invalid_argument("MobiusMap: determinant must be 1");
}

MobiusMap MobiusMap::operator*(const MobiusMap& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

std::string MobiusMap::str() const {
    std::ostringstream os;
    os << "(" << a << " " << b << "; " << c << " " << d << ")";
    return os.str();
}

BigComplex mobius_apply(const MobiusMap& g, const BigComplex& tau) {
    const mpfr_prec_t p = tau.prec();
    BigComplex num = BigFloat(g.a, p) * tau + BigComplex::from_long(g.b, p);
    BigComplex den = BigFloat(g.c, p) * tau + BigComplex::from_long(g.d, p);
    if (den.is_zero()) throw std::domain_error("mobius_apply: pole");
    return num / den;
}

// Evaluation ----------------------------------------------------------------

namespace {

constexpr mpfr_prec_t kGuardBits = 32;

bool doubling_ok(const BigComplex& coarse, const BigComplex& fine, mpfr_prec_t prec, double* log2_gap) {
    BigFloat gap = (coarse - fine).abs();
    BigFloat scale = max(BigFloat(1, gap.prec()), fine.abs());
    BigFloat rel = gap / scale;
    *log2_gap = rel.log2_abs();
    return *log2_gap <= -static_cast<double>(prec) / 2;
}

// Truncation at which |q|^T is about 2^{-prec}.
// Never above half the cap, so the doubled truncation stays within it.
Frac initial_truncation(const BigComplex& tau, mpfr_prec_t prec, const Frac& cap) {
    double im = tau.im.to_double();
    if (!(im > 0)) throw std::domain_error("tau must lie in the upper half-plane");
    double t = 0.6 * (static_cast<double>(prec) + 16) * std::log(2.0) / (2 * M_PI * im);
    const double half = std::max(2.0, std::floor(cap.to_double() / 2));
    return Frac(static_cast<std::int64_t>(std::ceil(std::min(half, std::max(4.0, t)))));
}

BigComplex one(mpfr_prec_t p) { return BigComplex::from_long(1, p); }

BigComplex at_prec(const BigComplex& z, mpfr_prec_t p) {
    BigComplex r(p);
    mpfr_set(r.re.get(), z.re.get(), MPFR_RNDN);
    mpfr_set(r.im.get(), z.im.get(), MPFR_RNDN);
    return r;
}

}  // namespace

Evaluation eval_series(const PuiseuxSeries& s, const BigComplex& tau_in, mpfr_prec_t prec) {
    if (tau_in.im.sign() <= 0) throw std::domain_error("eval_series: tau must lie in the upper half-plane");
    const mpfr_prec_t wp = prec + kGuardBits;
    BigComplex tau = at_prec(tau_in, wp);
    Evaluation out;
    out.value = BigComplex(wp);
    out.truncation = s.trunc();
    if (s.is_zero()) {
        out.converged = true;
        return out;
    }
    const auto& exps = s.raw_exps();
    const std::int64_t M = s.exp_den();
    BigComplex step = q_power(tau, Frac(1, M));
    BigComplex cur = q_power(tau, Frac(exps[0], M));
    const bool exact = s.is_exact();
    const Frac half = exact ? Frac(0) : s.trunc() / Frac(2);
    BigComplex coarse(wp);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i > 0) cur = cur * pow(step, exps[i] - exps[i - 1]);
        BigComplex c = embed(s.coeff_at(i), wp);
        BigComplex term = c * cur;
        out.value += term;
        if (!exact && s.exponent(i) < half) coarse += term;
    }
    if (exact) {
        out.converged = true;
        out.log2_gap = -std::numeric_limits<double>::infinity();
    } else {
        out.converged = doubling_ok(coarse, out.value, prec, &out.log2_gap);
    }
    return out;
}

namespace {

// prod_{k} (1 - sign q^{a + k step}) over exponents below T, then continued
// below 2T. Exponents at or below zero are always included.
struct FactorPair {
    BigComplex lo, hi;
};

FactorPair poch_numeric(const PochFactor& f, const BigComplex& tau, const Frac& T) {
    const mpfr_prec_t p = tau.prec();
    BigComplex lo = one(p);
    BigComplex term = q_power(tau, f.a);
    BigComplex ratio = q_power(tau, f.step);
    if (f.sign < 0) term = -term;
    Frac e = f.a;
    std::int64_t k = 0;
    const Frac T2 = T + T;
    bool switched = false;
    BigComplex hi = one(p);
    for (;;) {
        if (f.length && k >= *f.length) break;
        if (e >= T2) break;
        if (!switched && e >= T) {
            switched = true;
            hi = lo;
        }
        BigComplex factor = one(p) - term;
        if (switched)
            hi = hi * factor;
        else
            lo = lo * factor;
        term = term * ratio;
        e = e + f.step;
        ++k;
    }
    if (!switched) hi = lo;
    return {lo, hi};
}

}  // namespace

Evaluation eval_product(const ProductSpec& spec, const BigComplex& tau_in, const EvalOptions& opt) {
    if (tau_in.im.sign() <= 0) throw std::domain_error("eval_product: tau must lie in the upper half-plane");
    const mpfr_prec_t wp = opt.prec + kGuardBits;
    BigComplex tau = at_prec(tau_in, wp);
    Frac T = initial_truncation(tau, opt.prec, opt.max_truncation);
    BigComplex pre = BigFloat(spec.scalar, wp) * q_power(tau, spec.prefactor);
    for (;;) {
        BigComplex lo = pre, hi = pre;
        for (const auto& f : spec.factors) {
            if (f.step <= Frac(0)) throw std::invalid_argument("eval_product: factor step must be positive");
            auto fp = poch_numeric(f, tau, T);
            lo = lo * pow(fp.lo, f.power);
            hi = hi * pow(fp.hi, f.power);
        }
        Evaluation out;
        out.value = hi;
        out.truncation = T + T;
        out.converged = doubling_ok(lo, hi, opt.prec, &out.log2_gap);
        if (out.converged || Frac(4) * T > opt.max_truncation) return out;
        T = T + T;
    }
}

namespace {

// sum over n in Z of sign^n q^{(2 m n + j)^2 / (4 m)}, both truncations.
Evaluation theta_numeric(const ThetaIndex& idx, const BigComplex& tau_in, const EvalOptions& opt, bool alternating) {
    if (idx.m <= Frac(0)) throw std::invalid_argument("theta: m must be positive");
    if (tau_in.im.sign() <= 0) throw std::domain_error("theta: tau must lie in the upper half-plane");
    const mpfr_prec_t wp = opt.prec + kGuardBits;
    BigComplex tau = at_prec(tau_in, wp);
    Frac T = initial_truncation(tau, opt.prec, opt.max_truncation);
    const Frac four_m = Frac(4) * idx.m;
    auto exponent = [&](std::int64_t n) {
        Frac u = Frac(2) * idx.m * Frac(n) + idx.j;
        return u * u / four_m;
    };
    // the exponent is minimal near n0 = -j/(2m)
    const std::int64_t n0 = (-idx.j / (Frac(2) * idx.m)).floor();
    for (;;) {
        BigComplex lo(wp), hi(wp);
        const Frac T2 = T + T;
        for (int dir = 0; dir < 2; ++dir) {
            for (std::int64_t n = dir == 0 ? n0 : n0 - 1;; n += dir == 0 ? 1 : -1) {
                Frac e = exponent(n);
                if (e >= T2) {
                    // exponents grow monotonically away from the vertex
                    if ((dir == 0 && n > n0 + 1) || (dir == 1 && n < n0 - 1)) break;
                    continue;
                }
                BigComplex t = q_power(tau, e);
                if (alternating && (n % 2 != 0)) t = -t;
                hi += t;
                if (e < T) lo += t;
            }
        }
        Evaluation out;
        out.value = hi;
        out.truncation = T2;
        out.converged = doubling_ok(lo, hi, opt.prec, &out.log2_gap);
        if (out.converged || T2 + T2 > opt.max_truncation) return out;
        T = T2;
    }
}

}  // namespace

Evaluation eval_theta_g(const ThetaIndex& idx, const BigComplex& tau, const EvalOptions& opt) {
    return theta_numeric(idx, tau, opt, true);
}
Evaluation eval_theta_h(const ThetaIndex& idx, const BigComplex& tau, const EvalOptions& opt) {
    return theta_numeric(idx, tau, opt, false);
}

Evaluation eval_eta(const BigComplex& tau, const EvalOptions& opt) {
    ProductSpec s = jm(1);
    s.prefactor = Frac(1, 24);
    return eval_product(s, tau, opt);
}

Evaluation eval_gen_eta(int N, std::int64_t g, std::int64_t h, const BigComplex& tau_in, const EvalOptions& opt) {
    if (N < 1) throw std::invalid_argument("gen eta: N must be positive");
    if (g % N == 0 && h % N == 0) throw std::invalid_argument("gen eta: (g, h) must not both be 0 mod N");
    if (tau_in.im.sign() <= 0) throw std::domain_error("gen eta: tau must lie in the upper half-plane");
    const mpfr_prec_t wp = opt.prec + kGuardBits;
    BigComplex tau = at_prec(tau_in, wp);
    const Frac x(g, N);
    const BigComplex zh = exp_pi_i(Frac(2 * h, N), wp);
    const BigComplex zmh = exp_pi_i(Frac(-2 * h, N), wp);
    const BigComplex pre = q_power(tau, bernoulli2(x) / Frac(2));
    Frac T = initial_truncation(tau, opt.prec, opt.max_truncation);
    for (;;) {
        const Frac T2 = T + T;
        BigComplex lo = pre, hi = pre;
        // factor with exponent e contributes below T, below 2T, or always if e <= 0
        auto apply = [&](const Frac& e, const BigComplex& z) {
            if (e >= T2) return false;
            BigComplex f = one(wp) - z * q_power(tau, e);
            hi = hi * f;
            if (e < T) lo = lo * f;
            return true;
        };
        for (std::int64_t m = 1;; ++m) {
            bool a = apply(Frac(m - 1) + x, zh);
            bool b = apply(Frac(m) - x, zmh);
            if (!a && !b) break;
        }
        Evaluation out;
        out.value = hi;
        out.truncation = T2;
        out.converged = doubling_ok(lo, hi, opt.prec, &out.log2_gap);
        if (out.converged || T2 + T2 > opt.max_truncation) return out;
        T = T2;
    }
}

BigComplex certified(const Evaluation& e, const std::string& what) {
    if (!e.converged)
        throw NonConvergence(what + ": doubling rule failed at truncation " + e.truncation.str(), e.truncation * Frac(2));
    return e.value;
}

BigFloat relative_residual(const std::vector<BigComplex>& l, const std::vector<BigComplex>& r) {
    if (l.size() != r.size()) throw std::invalid_argument("relative_residual: length mismatch");
    if (l.empty()) return BigFloat(0, 64);
    const mpfr_prec_t p = l[0].prec();
    BigFloat big(0, p);
    for (const auto& x : l) big = max(big, x.abs());
    BigFloat floor = big * pow2(-static_cast<long>(p) + 40, p);
    BigFloat worst(0, p);
    for (std::size_t i = 0; i < l.size(); ++i) {
        BigFloat d = (l[i] - r[i]).abs();
        BigFloat s = max(l[i].abs(), floor);
        if (s.is_zero()) s = BigFloat(1, p);
        worst = max(worst, d / s);
    }
    return worst;
}

// Lemma checks ----------------------------------------------------------------

double LemmaReport::worst_log10() const {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) w = std::max(w, r.log10_residual);
    return w;
}
bool LemmaReport::all_converged() const {
    return std::all_of(rows.begin(), rows.end(), [](const LemmaResidual& r) { return r.converged; });
}

namespace {

double log10_of(const BigFloat& x) { return x.log2_abs() * std::log10(2.0); }

struct SideAcc {
    bool converged = true;
    BigComplex get(const Evaluation& e) {
        converged = converged && e.converged;
        return e.value;
    }
};

LemmaResidual residual_row(const std::string& label, const BigComplex& l, const BigComplex& r, bool converged) {
    LemmaResidual row;
    row.label = label;
    row.log10_residual = std::max(-999.0, log10_of(relative_residual({l}, {r})));
    row.converged = converged;
    return row;
}

// g_{j,m} is identically zero when j = m mod 2m; compare absolutely then.
bool g_vanishes(const Frac& j, const Frac& m) { return ((j - m) / (Frac(2) * m)).is_integer(); }

LemmaResidual absolute_row(const std::string& label, const BigComplex& l, const BigComplex& r, bool converged) {
    LemmaResidual row;
    row.label = label + " (vanishes identically)";
    BigFloat d = max((l - r).abs(), l.abs());
    row.log10_residual = std::max(-999.0, log10_of(d));
    row.converged = converged;
    return row;
}

std::string jm_label(const char* f, const Frac& j, const Frac& m) {
    return std::string(f) + "_{" + j.str() + "," + m.str() + "}";
}

}  // namespace

LemmaReport verify_theta_lemma(ThetaLemma which, const Frac& j, const Frac& m, const BigComplex& tau, mpfr_prec_t prec) {
    EvalOptions opt;
    opt.prec = prec;
    const mpfr_prec_t wp = prec + kGuardBits;
    LemmaReport rep;
    SideAcc acc;
    auto G = [&](const Frac& jj, const Frac& mm, const BigComplex& t) { return acc.get(eval_theta_g({jj, mm}, t, opt)); };
    auto H = [&](const Frac& jj, const Frac& mm, const BigComplex& t) { return acc.get(eval_theta_h({jj, mm}, t, opt)); };
    auto real = [&](const BigFloat& x) { return BigComplex(x, BigFloat(0, wp)); };
    const BigComplex I = BigComplex::from_rational(0, 1, wp);
    const BigFloat pi = BigFloat::pi(wp);

    switch (which) {
        case ThetaLemma::WeightHalfS: {
            if (!j.is_integer() || !(m > Frac(0)) || !(Frac(2) * m).is_integer())
                throw std::invalid_argument("weight-1/2 S law needs integer j and m in N/2");
            const std::int64_t two_m = (Frac(2) * m).num();
            BigComplex st = mobius_apply(MobiusMap::S(), tau);
            BigComplex fac = sqrt_principal(-(I * tau)) / real(sqrt(BigFloat(Rational(two_m), wp)));
            BigComplex rh(wp);
            for (std::int64_t k = 0; k < two_m; ++k) rh += exp_pi_i(j * Frac(k) / m, wp) * H(Frac(k), m, tau);
            BigComplex lh = H(j, m, st);
            rep.rows.push_back(residual_row(jm_label("h", j, m) + "(-1/tau)", lh, fac * rh, acc.converged));
            acc.converged = true;
            BigComplex rg(wp);
            for (std::int64_t k = 1; k < 2 * two_m; k += 2)
                rg += exp_pi_i(j * Frac(k) / (Frac(2) * m), wp) * H(Frac(k, 2), m, tau);
            BigComplex lg = G(j, m, st);
            rep.rows.push_back((g_vanishes(j, m) ? absolute_row : residual_row)(jm_label("g", j, m) + "(-1/tau)", lg,
                                                                                fac * rg, acc.converged));
            break;
        }
        case ThetaLemma::WeightHalfT: {
            if (!(j + m).is_integer() || !(m > Frac(0))) throw std::invalid_argument("T law needs j + m integer");
            BigComplex t1 = tau + BigComplex::from_long(1, tau.prec());
            BigComplex ph = exp_pi_i(j * j / (Frac(2) * m), wp);
            BigComplex lh = H(j, m, t1), rh = ph * H(j, m, tau);
            rep.rows.push_back(residual_row(jm_label("h", j, m) + "(tau+1)", lh, rh, acc.converged));
            acc.converged = true;
            BigComplex lg = G(j, m, t1), rg = ph * G(j, m, tau);
            rep.rows.push_back(
                (g_vanishes(j, m) ? absolute_row : residual_row)(jm_label("g", j, m) + "(tau+1)", lg, rg, acc.converged));
            break;
        }
        case ThetaLemma::QuarterG:
        case ThetaLemma::QuarterH: {
            if (!j.is_integer() || !m.is_integer()) throw std::invalid_argument("quarter law needs integer j, k");
            const std::int64_t J = j.num(), k = m.num();
            if (k < 2 || J < 0 || J > k) throw std::invalid_argument("quarter law needs k >= 2 and 0 <= j <= k");
            BigComplex t4 = mobius_apply(MobiusMap::S(), BigFloat(4, wp) * tau);
            BigComplex c = BigFloat(2, wp) * sqrt_principal(BigFloat(-2, wp) * (I * tau)) /
                           real(sqrt(BigFloat(Rational(k), wp)));
            auto cosf = [&](const Frac& x) {  // cos(x pi)
                return real(exp_pi_i(x, wp).re);
            };
            const BigComplex half = BigComplex::from_rational(Rational(1, 2), 0, wp);
            BigComplex rhs(wp), lhs(wp);
            if (which == ThetaLemma::QuarterG) {
                lhs = G(j, m, t4);
                auto cs = [&](std::int64_t l) { return cosf(Frac((2 * l + 1) * J, 2 * k)); };
                if (k % 2 == 0) {
                    for (std::int64_t l = 0; l <= (k - 2) / 2; ++l)
                        rhs += cs(l) * (J % 2 == 0 ? H(Frac(2 * l + 1), m, tau) : G(Frac(2 * l + 1), m, tau));
                } else if (J % 2 == 0) {
                    for (std::int64_t l = 0; l <= (k - 3) / 2; ++l) rhs += cs(l) * H(Frac(2 * l + 1), m, tau);
                    rhs += half * cosf(Frac(J, 2)) * H(m, m, tau);
                } else {
                    for (std::int64_t l = 0; l <= (k - 3) / 2; ++l) rhs += cs(l) * G(Frac(2 * l + 1), m, tau);
                }
            } else {
                lhs = H(j, m, t4);
                auto cs = [&](std::int64_t l) { return cosf(Frac(l * J, k)); };
                const bool even_j = J % 2 == 0;
                auto F = [&](std::int64_t a) { return even_j ? H(Frac(a), m, tau) : G(Frac(a), m, tau); };
                const std::int64_t top = k % 2 == 0 ? (k - 2) / 2 : (k - 1) / 2;
                for (std::int64_t l = 1; l <= top; ++l) rhs += cs(l) * F(2 * l);
                rhs += half * F(0);
                if (k % 2 == 0 && even_j) rhs += half * cosf(Frac(J, 2)) * H(m, m, tau);
            }
            const bool zero = which == ThetaLemma::QuarterG && g_vanishes(j, m);
            rep.rows.push_back((zero ? absolute_row : residual_row)(
                jm_label(which == ThetaLemma::QuarterG ? "g" : "h", j, m) + "(-1/(4tau))", lhs, c * rhs, acc.converged));
            break;
        }
    }
    return rep;
}

LemmaReport verify_theta_lemmas(const Frac& j, const Frac& m, const BigComplex& tau, mpfr_prec_t prec) {
    LemmaReport all;
    auto take = [&](ThetaLemma w) {
        auto r = verify_theta_lemma(w, j, m, tau, prec);
        all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    };
    bool any = false;
    if (j.is_integer() && m > Frac(0) && (Frac(2) * m).is_integer()) take(ThetaLemma::WeightHalfS), any = true;
    if (m > Frac(0) && (j + m).is_integer()) take(ThetaLemma::WeightHalfT), any = true;
    if (j.is_integer() && m.is_integer() && m >= Frac(2) && j >= Frac(0) && j <= m) {
        take(ThetaLemma::QuarterG);
        take(ThetaLemma::QuarterH);
        any = true;
    }
    if (!any) throw std::invalid_argument("no theta transformation law applies to (" + j.str() + ", " + m.str() + ")");
    return all;
}

Frac gen_eta_epsilon_angle(const MobiusMap& g) {
    const std::int64_t a = g.a, b = g.b, c = g.c, d = g.d;
    if (c == 0) throw std::invalid_argument("epsilon: c must be nonzero");
    if (c % 2 != 0) return Frac(b * d * (1 - c * c) + c * (a + d - 3), 6);
    // -i = e^{-pi i/2}
    return Frac(a * c * (1 - d * d) + d * (b - c + 3), 6) - Frac(1, 2);
}

Frac gen_eta_delta(int N, std::int64_t g, std::int64_t h, const MobiusMap& m) {
    const std::int64_t a = m.a, b = m.b, c = m.c, d = m.d;
    return Frac(g * g * a * b + 2 * g * h * b * c + h * h * c * d, std::int64_t(N) * N) - Frac(g * b + h * (d - 1), N);
}

LemmaReport verify_gen_eta(int N, std::int64_t g, std::int64_t h, const MobiusMap& gamma, const BigComplex& tau,
                           mpfr_prec_t prec) {
    if (g % N == 0 && h % N == 0) throw std::invalid_argument("gen eta law: (g, h) must not both be 0 mod N");
    EvalOptions opt;
    opt.prec = prec;
    const mpfr_prec_t wp = prec + kGuardBits;
    LemmaReport rep;
    std::ostringstream label;
    label << "E^(" << N << ")_{" << g << "," << h << "} at " << gamma.str();
    if (gamma.c == 0) {
        if (gamma.a != 1 || gamma.d != 1) throw std::invalid_argument("gen eta law with c = 0 needs a = d = 1");
        BigComplex tb = tau + BigComplex::from_long(gamma.b, tau.prec());
        auto l = eval_gen_eta(N, g, h, tb, opt);
        auto r = eval_gen_eta(N, g, gamma.b * g + h, tau, opt);
        BigComplex ph = exp_pi_i(Frac(gamma.b) * bernoulli2(Frac(g, N)), wp);
        rep.rows.push_back(residual_row(label.str(), l.value, ph * r.value, l.converged && r.converged));
        return rep;
    }
    const std::int64_t gp = g * gamma.a + h * gamma.c, hp = g * gamma.b + h * gamma.d;
    BigComplex gt = mobius_apply(gamma, tau);
    auto l = eval_gen_eta(N, g, h, gt, opt);
    auto r = eval_gen_eta(N, gp, hp, tau, opt);
    BigComplex mult = exp_pi_i(gen_eta_epsilon_angle(gamma) + gen_eta_delta(N, g, h, gamma), wp);
    rep.rows.push_back(residual_row(label.str(), l.value, mult * r.value, l.converged && r.converged));
    return rep;
}

}  // namespace qmod
