// Exact arithmetic in Q and in cyclotomic fields Q(zeta_n).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace qmod {

using Rational = mpq_class;
using BigInt = mpz_class;

// Data for Q(zeta_n): the minimal polynomial Phi_n and the reductions of
// x^k modulo Phi_n for 0 <= k < n.
struct CycloField {
    int n = 1;
    int phi = 1;
    std::vector<std::int64_t> poly;                  // Phi_n, low degree first, monic of degree phi
    std::vector<std::vector<std::int64_t>> power;    // power[k] = x^k mod Phi_n (length phi)
};

// Cached, thread-safe. Throws for n < 1 or n above the supported cap.
const CycloField& cyclo_field(int n);

// Phi_n as an integer polynomial (low degree first).
std::vector<std::int64_t> cyclotomic_polynomial(int n);

int euler_phi(int n);

Rational parse_rational(const std::string& s);
std::string rational_str(const Rational& q);

class CycloElement {
public:
    CycloElement() : n_(1), c_(1) {}
    explicit CycloElement(int n);
    CycloElement(int n, std::vector<Rational> coeffs);  // reduces if longer than phi(n)

    static CycloElement rational(const Rational& q, int n = 1);
    static CycloElement integer(long v, int n = 1) { return rational(Rational(v), n); }
    static CycloElement zeta(int n, std::int64_t m);

    int conductor() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;  // only the constant coefficient may be nonzero
    Rational rational_value() const { return c_[0]; }

    // Embedding Q(zeta_n) -> Q(zeta_N), n | N.
    CycloElement lift(int N) const;
    // Complex conjugation zeta -> zeta^{-1}.
    CycloElement conj() const;
    CycloElement inverse() const;

    std::string str() const;

    friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator-(const CycloElement& a);
    friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator/(const CycloElement& a, const CycloElement& b) { return a * b.inverse(); }
    CycloElement& operator+=(const CycloElement& o) { return *this = *this + o; }
    CycloElement& operator*=(const CycloElement& o) { return *this = *this * o; }
    friend bool operator==(const CycloElement& a, const CycloElement& b);

private:
    int n_;
    std::vector<Rational> c_;
};

// zeta_n^m reduced modulo Phi_n.
inline CycloElement cyclo_embed(std::int64_t m, int n) { return CycloElement::zeta(n, m); }

// Reduces an integer polynomial of any degree (exponents taken mod n) into
// the power basis of Q(zeta_n), accumulating into out[0..phi).
void reduce_into(const CycloField& F, const std::vector<BigInt>& poly, BigInt* out);

}  // namespace qmod
