// Truncated Puiseux series in q with exact (rational or cyclotomic) coefficients.
#pragma once

#include "qmod/cyclotomic.hpp"
#include "qmod/frac.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qmod {

// Stands in for "no truncation". Orders at or above half of it are treated as
// infinite and clamped back to it.
inline const Frac kExactOrder = Frac(std::int64_t{1} << 40);

inline bool is_infinite_order(const Frac& t) { return t >= Frac(std::int64_t{1} << 39); }

struct SeriesLimits {
    Frac exponent_floor = Frac(-10);  // in units of q
};

struct Ring {
    int conductor = 1;
    bool is_rational() const { return conductor == 1; }
    std::string str() const { return conductor == 1 ? "Q" : "Q(zeta_" + std::to_string(conductor) + ")"; }
    friend bool operator==(const Ring&, const Ring&) = default;
};

class PuiseuxSeries {
public:
    // Exact zero over Q.
    PuiseuxSeries();

    static PuiseuxSeries zero(Ring ring, Frac trunc = kExactOrder);
    static PuiseuxSeries one(Ring ring = {});
    static PuiseuxSeries term(Ring ring, Frac exponent, const CycloElement& coeff);
    static PuiseuxSeries term(Frac exponent, const Rational& coeff = 1) {
        return term(Ring{}, exponent, CycloElement::rational(coeff));
    }

    // Builds from scaled data: coefficient of q^{exps[i]/M} is
    // (nums[i*phi], ..., nums[i*phi+phi-1]) / den. Exponents need not be
    // sorted or distinct; entries at or above trunc are dropped.
    static PuiseuxSeries from_raw(Ring ring, std::int64_t M, std::vector<std::int64_t> exps, std::vector<BigInt> nums,
                                  BigInt den, Frac trunc);

    Ring ring() const { return ring_; }
    int phi() const { return phi_; }
    std::int64_t exp_den() const { return M_; }
    Frac trunc() const { return trunc_; }
    bool is_exact() const { return is_infinite_order(trunc_); }
    std::size_t size() const { return exps_.size(); }
    bool is_zero() const { return exps_.empty(); }

    Frac exponent(std::size_t i) const { return Frac(exps_[i], M_); }
    CycloElement coeff_at(std::size_t i) const;
    // Coefficient of q^e; throws if e is not below the truncation order.
    CycloElement coeff(const Frac& e) const;
    // Least stored exponent, or the truncation order for an empty series.
    Frac order() const;

    std::vector<std::pair<Frac, CycloElement>> terms() const;

    const std::vector<std::int64_t>& raw_exps() const { return exps_; }
    const std::vector<BigInt>& raw_nums() const { return nums_; }
    const BigInt& raw_den() const { return den_; }

    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b);

private:
    Ring ring_;
    int phi_ = 1;
    std::int64_t M_ = 1;
    std::vector<std::int64_t> exps_;  // sorted, distinct
    std::vector<BigInt> nums_;        // phi_ entries per term
    BigInt den_ = 1;                  // > 0, coprime to the gcd of nums_
    Frac trunc_ = kExactOrder;
};

PuiseuxSeries series_from_term(Ring ring, const Frac& exponent, const CycloElement& coeff);

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries sub(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries neg(const PuiseuxSeries& a);
PuiseuxSeries scale(const PuiseuxSeries& a, const CycloElement& c);
PuiseuxSeries scale(const PuiseuxSeries& a, const Rational& c);
PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b, const SeriesLimits& lim = {});
// For exact multi-term input an explicit order is required.
PuiseuxSeries invert(const PuiseuxSeries& a, std::optional<Frac> order = std::nullopt, const SeriesLimits& lim = {});
PuiseuxSeries pow(const PuiseuxSeries& a, long e, std::optional<Frac> order = std::nullopt, const SeriesLimits& lim = {});
PuiseuxSeries substitute_q_power(const PuiseuxSeries& a, std::int64_t k);
PuiseuxSeries truncate(const PuiseuxSeries& a, const Frac& T);
// Multiplies by q^e.
PuiseuxSeries shift(const PuiseuxSeries& a, const Frac& e, const SeriesLimits& lim = {});
// Embeds the coefficients into Q(zeta_n).
PuiseuxSeries to_ring(const PuiseuxSeries& a, int n);
// Terms whose exponent is congruent to r modulo m.
PuiseuxSeries residue_part(const PuiseuxSeries& a, const Frac& m, const Frac& r);

inline PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return add(a, b); }
inline PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return sub(a, b); }
inline PuiseuxSeries operator-(const PuiseuxSeries& a) { return neg(a); }
inline PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return mul(a, b); }

// Product of (1 - u q^{a + k*step}) for k = 0..n-1 (n = nullopt means infinity),
// known below T. With finite n and T = kExactOrder the result is exact.
PuiseuxSeries pochhammer(const Frac& a_exp, const std::optional<CycloElement>& unit_root, const Frac& step,
                         std::optional<std::int64_t> n, const Frac& T, const SeriesLimits& lim = {});

struct CompareResult {
    bool equal = true;
    Frac exponent;
    CycloElement left, right;
};

CompareResult compare_to_order(const PuiseuxSeries& a, const PuiseuxSeries& b, const Frac& T);

// Human-readable listing "e: c" per line.
std::string format_terms(const PuiseuxSeries& s);

}  // namespace qmod
