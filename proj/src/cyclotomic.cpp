#include "qmod/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qmod {

namespace {

constexpr int kMaxConductor = 20000;

using IntPoly = std::vector<std::int64_t>;

// Exact division of a by monic b; throws if the remainder is nonzero.
IntPoly exact_divide(IntPoly a, const IntPoly& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) throw std::logic_error("exact_divide: degree");
    IntPoly q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        std::int64_t c = a[i];
        q[i - db] = c;
        if (c != 0)
            for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    for (std::size_t i = 0; i < db; ++i)
        if (a[i] != 0) throw std::logic_error("exact_divide: nonzero remainder");
    return q;
}

std::mutex g_cache_mutex;
std::map<int, std::unique_ptr<CycloField>>& cache() {
    static std::map<int, std::unique_ptr<CycloField>> m;
    return m;
}

std::unique_ptr<CycloField> build_field(int n) {
    auto F = std::make_unique<CycloField>();
    F->n = n;
    F->poly = cyclotomic_polynomial(n);
    F->phi = static_cast<int>(F->poly.size()) - 1;
    const int phi = F->phi;
    F->power.assign(n, IntPoly(phi, 0));
    IntPoly cur(phi, 0);
    cur[0] = 1;
    if (phi == 0) throw std::logic_error("cyclo field degree 0");
    for (int k = 0; k < n; ++k) {
        F->power[k] = cur;
        // multiply by x and reduce
        std::int64_t top = cur[phi - 1];
        for (int j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top != 0)
            for (int j = 0; j < phi; ++j) cur[j] -= top * F->poly[j];
    }
    return F;
}

// Dense polynomial helpers over Q for the extended Euclidean algorithm.
using QPoly = std::vector<Rational>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    const Rational& lead = b.back();
    while (!r.empty() && r.size() >= b.size()) {
        std::size_t shift = r.size() - b.size();
        Rational c = r.back() / lead;
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
        trim(r);
    }
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
    QPoly c(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

}  // namespace

int euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

std::vector<std::int64_t> cyclotomic_polynomial(int n) {
    if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    IntPoly num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) num = exact_divide(num, cyclo_field(d).poly);
    return num;
}

const CycloField& cyclo_field(int n) {
    if (n < 1 || n > kMaxConductor) throw std::invalid_argument("cyclotomic conductor out of range: " + std::to_string(n));
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = cache().find(n);
        if (it != cache().end()) return *it->second;
    }
    // Build outside the lock (recursion into divisors), then publish; the
    // first published instance wins.
    std::unique_ptr<CycloField> F;
    if (n == 1) {
        F = std::make_unique<CycloField>();
        F->n = 1;
        F->phi = 1;
        F->poly = {-1, 1};
        F->power = {{1}};
    } else {
        F = build_field(n);
    }
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto [it, inserted] = cache().emplace(n, std::move(F));
    return *it->second;
}

void reduce_into(const CycloField& F, const std::vector<BigInt>& poly, BigInt* out) {
    for (std::size_t t = 0; t < poly.size(); ++t) {
        if (poly[t] == 0) continue;
        const auto& pw = F.power[t % static_cast<std::size_t>(F.n)];
        for (int j = 0; j < F.phi; ++j)
            if (pw[j] != 0) out[j] += poly[t] * pw[j];
    }
}

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

CycloElement::CycloElement(int n) : n_(n), c_(cyclo_field(n).phi, Rational(0)) {}

CycloElement::CycloElement(int n, std::vector<Rational> coeffs) : n_(n) {
    const auto& F = cyclo_field(n);
    if (static_cast<int>(coeffs.size()) <= F.phi) {
        coeffs.resize(F.phi, Rational(0));
        c_ = std::move(coeffs);
        return;
    }
    c_.assign(F.phi, Rational(0));
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        if (coeffs[t] == 0) continue;
        const auto& pw = F.power[t % static_cast<std::size_t>(n)];
        for (int j = 0; j < F.phi; ++j)
            if (pw[j] != 0) c_[j] += coeffs[t] * pw[j];
    }
}

CycloElement CycloElement::rational(const Rational& q, int n) {
    CycloElement e(n);
    e.c_[0] = q;
    return e;
}

CycloElement CycloElement::zeta(int n, std::int64_t m) {
    const auto& F = cyclo_field(n);
    std::int64_t k = ((m % n) + n) % n;
    CycloElement e(n);
    for (int j = 0; j < F.phi; ++j) e.c_[j] = Rational(static_cast<long>(F.power[k][j]));
    return e;
}

bool CycloElement::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycloElement::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool CycloElement::is_one() const { return is_rational() && c_[0] == 1; }

CycloElement CycloElement::lift(int N) const {
    if (N == n_) return *this;
    if (N % n_ != 0) throw std::invalid_argument("cannot embed Q(zeta_" + std::to_string(n_) + ") into Q(zeta_" + std::to_string(N) + ")");
    const auto& G = cyclo_field(N);
    const std::int64_t r = N / n_;
    CycloElement e(N);
    for (std::size_t t = 0; t < c_.size(); ++t) {
        if (c_[t] == 0) continue;
        const auto& pw = G.power[(static_cast<std::int64_t>(t) * r) % N];
        for (int j = 0; j < G.phi; ++j)
            if (pw[j] != 0) e.c_[j] += c_[t] * pw[j];
    }
    return e;
}

CycloElement CycloElement::conj() const {
    const auto& F = cyclo_field(n_);
    CycloElement e(n_);
    for (std::size_t t = 0; t < c_.size(); ++t) {
        if (c_[t] == 0) continue;
        const auto& pw = F.power[(n_ - static_cast<int>(t) % n_) % n_];
        for (int j = 0; j < F.phi; ++j)
            if (pw[j] != 0) e.c_[j] += c_[t] * pw[j];
    }
    return e;
}

CycloElement CycloElement::inverse() const {
    if (is_zero()) throw std::domain_error("CycloElement: inverse of zero");
    if (is_rational()) return rational(1 / c_[0], n_);
    // Extended Euclid: find s with s*a = 1 mod Phi_n.
    const auto& F = cyclo_field(n_);
    QPoly m(F.poly.size());
    for (std::size_t i = 0; i < F.poly.size(); ++i) m[i] = Rational(static_cast<long>(F.poly[i]));
    QPoly a = c_;
    trim(a);
    QPoly r0 = m, r1 = a, s0, s1 = {Rational(1)};
    while (!(r1.size() == 1)) {
        if (r1.empty()) throw std::logic_error("CycloElement::inverse: not invertible");
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    Rational c = r1[0];
    for (auto& x : s1) x /= c;
    return CycloElement(n_, s1);
}

namespace {
int common_conductor(int a, int b) { return std::lcm(a, b); }
}  // namespace

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
    if (a.n_ != b.n_) {
        int n = common_conductor(a.n_, b.n_);
        return a.lift(n) + b.lift(n);
    }
    CycloElement r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
}

CycloElement operator-(const CycloElement& a) {
    CycloElement r = a;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) { return a + (-b); }

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
    if (a.n_ != b.n_) {
        int n = common_conductor(a.n_, b.n_);
        return a.lift(n) * b.lift(n);
    }
    const std::size_t phi = a.c_.size();
    if (phi == 1) return CycloElement::rational(a.c_[0] * b.c_[0], a.n_);
    std::vector<Rational> prod(2 * phi - 1, Rational(0));
    for (std::size_t i = 0; i < phi; ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < phi; ++j)
            if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    return CycloElement(a.n_, std::move(prod));
}

bool operator==(const CycloElement& a, const CycloElement& b) {
    if (a.n_ != b.n_) {
        int n = common_conductor(a.n_, b.n_);
        return a.lift(n) == b.lift(n);
    }
    return a.c_ == b.c_;
}

std::string CycloElement::str() const {
    if (is_rational()) return rational_str(c_[0]);
    std::string out;
    for (std::size_t t = 0; t < c_.size(); ++t) {
        const Rational& x = c_[t];
        if (x == 0) continue;
        Rational ax = abs(x);
        std::string mono = t == 0 ? "" : (t == 1 ? "z" : "z^" + std::to_string(t));
        std::string body;
        if (t == 0) body = rational_str(ax);
        else if (ax == 1) body = mono;
        else body = rational_str(ax) + "*" + mono;
        if (out.empty()) out = (x < 0 ? "-" : "") + body;
        else out += (x < 0 ? " - " : " + ") + body;
    }
    return out;
}

}  // namespace qmod
