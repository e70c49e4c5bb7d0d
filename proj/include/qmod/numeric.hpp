// Multiprecision complex evaluation of q-series at points of the upper
// half-plane, q = e^{2 pi i tau}.
#pragma once

#include "qmod/products.hpp"
#include "qmod/series.hpp"

#include <mpfr.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qmod {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 192);
    BigFloat(long v, mpfr_prec_t prec);
    BigFloat(const Rational& v, mpfr_prec_t prec);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;
    ~BigFloat();

    static BigFloat pi(mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // log2 |x|, -inf for 0.
    double log2_abs() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    std::string str(int digits = 20) const;

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a);
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }

private:
    mpfr_t v_;
};

BigFloat sqrt(const BigFloat& x);
BigFloat max(const BigFloat& a, const BigFloat& b);
// 2^e at the given precision.
BigFloat pow2(long e, mpfr_prec_t prec);

struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(mpfr_prec_t prec = 192) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    static BigComplex from_rational(const Rational& r, const Rational& i, mpfr_prec_t prec);
    static BigComplex from_long(long r, mpfr_prec_t prec) { return from_rational(r, 0, prec); }

    mpfr_prec_t prec() const { return std::min(re.prec(), im.prec()); }
    BigFloat abs() const;
    BigFloat norm() const;  // |z|^2
    BigComplex conj() const { return {re, -im}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str(int digits = 20) const;

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a);
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator*(const BigFloat& a, const BigComplex& b);
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
    BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
    BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }
};

BigComplex exp(const BigComplex& z);
// Principal branch: argument of the result in (-pi/2, pi/2]. Throws on zero.
BigComplex sqrt_principal(const BigComplex& z);
// z^n for integer n (repeated squaring; n < 0 inverts).
BigComplex pow(const BigComplex& z, long n);
// e^{pi i x}.
BigComplex exp_pi_i(const Frac& x, mpfr_prec_t prec);
// e^{2 pi i tau x}.
BigComplex q_power(const BigComplex& tau, const Frac& x);
// Value of zeta_n -> e^{2 pi i/n} applied to a cyclotomic element.
BigComplex embed(const CycloElement& c, mpfr_prec_t prec);

// Parses "a/b+c/d*i", "i", "-1/3+2/3*i", "2*i", "1/5+1/2i"; throws on malformed
// input or Im tau <= 0.
BigComplex parse_tau(const std::string& text, mpfr_prec_t prec);
struct RationalTau {
    Rational re, im;
};
RationalTau parse_tau_exact(const std::string& text);

struct MobiusMap {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    MobiusMap() = default;
    MobiusMap(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_);  // throws unless ad - bc = 1
    static MobiusMap T() { return {1, 1, 0, 1}; }
    static MobiusMap S() { return {0, -1, 1, 0}; }
    // tau -> tau/(N tau + 1)
    static MobiusMap gamma0(std::int64_t N) { return {1, 0, N, 1}; }
    MobiusMap operator*(const MobiusMap& o) const;
    std::string str() const;
};

// (a tau + b)/(c tau + d). Throws on a pole.
BigComplex mobius_apply(const MobiusMap& g, const BigComplex& tau);

// Outcome of a truncated evaluation certified by the doubling rule:
// |v(T) - v(2T)| <= 2^{-prec/2} max(1, |v(2T)|).
struct Evaluation {
    BigComplex value;
    bool converged = false;
    Frac truncation = 0;   // the larger truncation used
    double log2_gap = 0;   // log2 of the relative gap between v(T) and v(2T)
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, Frac needed) : std::runtime_error(what), needed(needed) {}
    Frac needed;
};

// Sum of coeff * q^exponent over the stored terms. The doubling rule compares
// the partial sum below trunc/2 with the full sum; an exact series is summed
// in full and reported converged.
Evaluation eval_series(const PuiseuxSeries& s, const BigComplex& tau, mpfr_prec_t prec);

struct EvalOptions {
    mpfr_prec_t prec = 192;
    Frac max_truncation = 40000;
};

// Numeric value of a product spec; factors are expanded up to exponent T, with
// T doubled until the doubling rule holds or the cap is reached.
Evaluation eval_product(const ProductSpec& spec, const BigComplex& tau, const EvalOptions& opt = {});

// Direct theta sums g_{j,m} and h_{j,m} (j, m rational, m > 0).
Evaluation eval_theta_g(const ThetaIndex& idx, const BigComplex& tau, const EvalOptions& opt = {});
Evaluation eval_theta_h(const ThetaIndex& idx, const BigComplex& tau, const EvalOptions& opt = {});

Evaluation eval_eta(const BigComplex& tau, const EvalOptions& opt = {});
// Generalized Dedekind eta E^{(N)}_{g,h}, any integers g, h.
Evaluation eval_gen_eta(int N, std::int64_t g, std::int64_t h, const BigComplex& tau, const EvalOptions& opt = {});

// Throws NonConvergence if the evaluation was not certified.
BigComplex certified(const Evaluation& e, const std::string& what);

// max_i |l_i - r_i| / |l_i|, with components of l that vanish to working
// precision measured against the largest |l_i|.
BigFloat relative_residual(const std::vector<BigComplex>& l, const std::vector<BigComplex>& r);

// Lemma checks ----------------------------------------------------------

struct LemmaResidual {
    std::string label;
    double log10_residual = 0;  // log10 of the relative residual
    bool converged = true;
};

struct LemmaReport {
    std::vector<LemmaResidual> rows;
    double worst_log10() const;
    bool all_converged() const;
};

enum class ThetaLemma {
    WeightHalfS,  // h/g at -1/tau as sums over h_{k,m} (j integer, 2m integer)
    WeightHalfT,  // g/h at tau + 1, j + m integer
    QuarterG,     // g_{j,k}(-1/(4 tau)), 0 <= j <= k, k >= 2
    QuarterH,     // h_{j,k}(-1/(4 tau))
};

// Both sides of the theta transformation law for (j, m) at tau. Throws
// std::invalid_argument for parameters outside the law's range.
LemmaReport verify_theta_lemma(ThetaLemma which, const Frac& j, const Frac& m, const BigComplex& tau,
                               mpfr_prec_t prec);
// All applicable laws for (j, m).
LemmaReport verify_theta_lemmas(const Frac& j, const Frac& m, const BigComplex& tau, mpfr_prec_t prec);

// The multiplier epsilon(a, b, c, d) of the generalized eta law (c != 0) as a
// root of unity e^{pi i r}, and the exponent delta.
Frac gen_eta_epsilon_angle(const MobiusMap& g);
Frac gen_eta_delta(int N, std::int64_t g, std::int64_t h, const MobiusMap& m);

// E_{g,h}(gamma tau) against eps * e^{pi i delta} * E_{g', h'}(tau), (g', h') =
// (g, h) gamma. For c = 0 the law is the shift rule with e^{pi i b B(g/N)}.
LemmaReport verify_gen_eta(int N, std::int64_t g, std::int64_t h, const MobiusMap& gamma, const BigComplex& tau,
                           mpfr_prec_t prec);

}  // namespace qmod
