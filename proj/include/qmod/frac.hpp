// Small exact rationals with 64-bit parts, used for exponents and angles.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <compare>
#include <ostream>

namespace qmod {

namespace detail {
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Frac: multiplication overflow");
    return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Frac: addition overflow");
    return r;
}
}  // namespace detail

class Frac {
public:
    constexpr Frac() = default;
    Frac(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Frac(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    std::int64_t ceil() const { return -Frac(-num_, den_).floor(); }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Parses "p", "-p", "p/q".
    static Frac parse(const std::string& s);
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        std::int64_t g = std::gcd(a.den_, b.den_);
        std::int64_t l = detail::checked_mul(a.den_ / g, b.den_);
        return Frac(detail::checked_add(detail::checked_mul(a.num_, l / a.den_),
                                        detail::checked_mul(b.num_, l / b.den_)),
                    l);
    }
    friend Frac operator-(const Frac& a) { return Frac(-a.num_, a.den_); }
    friend Frac operator-(const Frac& a, const Frac& b) { return a + (-b); }
    friend Frac operator*(const Frac& a, const Frac& b) {
        std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        return Frac(detail::checked_mul(a.num_ / g1, b.num_ / g2), detail::checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num_ == 0) throw std::domain_error("Frac: division by zero");
        return a * Frac(b.den_, b.num_);
    }
    Frac& operator+=(const Frac& o) { return *this = *this + o; }
    Frac& operator-=(const Frac& o) { return *this = *this - o; }
    Frac& operator*=(const Frac& o) { return *this = *this * o; }

    friend bool operator==(const Frac& a, const Frac& b) = default;
    friend std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend std::ostream& operator<<(std::ostream& os, const Frac& f) { return os << f.str(); }

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("Frac: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Frac Frac::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        std::size_t pos = 0;
        if (slash == std::string::npos) {
            std::int64_t n = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return Frac(n);
        }
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        std::int64_t n = std::stoll(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(s);
        std::int64_t d = std::stoll(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(s);
        return Frac(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a rational number: '" + s + "'");
    }
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    return detail::checked_mul(a / std::gcd(a, b), b);
}

}  // namespace qmod
