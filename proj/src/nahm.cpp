#include "qmod/nahm.hpp"

#include "json.hpp"
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmod {

namespace {

using RMatrix = std::vector<std::vector<Rational>>;
using LD = long double;

Rational to_rational(const Frac& f) { return Rational(BigInt(static_cast<long>(f.num())), BigInt(static_cast<long>(f.den()))); }

RMatrix to_rational(const FracMatrix& G) {
    RMatrix R(G.size());
    for (std::size_t i = 0; i < G.size(); ++i)
        for (const auto& x : G[i]) R[i].push_back(to_rational(x));
    return R;
}

LD to_ld(const Rational& q) { return static_cast<LD>(q.get_d()); }

void require_square_symmetric(const FracMatrix& G, std::size_t r, const char* what) {
    if (G.size() != r) throw std::invalid_argument(std::string(what) + ": matrix size does not match the rank");
    for (std::size_t i = 0; i < r; ++i) {
        if (G[i].size() != r) throw std::invalid_argument(std::string(what) + ": matrix is not square");
        for (std::size_t j = 0; j < i; ++j)
            if (G[i][j] != G[j][i]) throw std::invalid_argument(std::string(what) + ": quadratic form is not symmetric");
    }
}

// Inverse of a small positive definite matrix by Gauss-Jordan.
std::vector<std::vector<LD>> inverse_ld(std::vector<std::vector<LD>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<LD>> inv(n, std::vector<LD>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        const LD d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const LD f = a[r][c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

// Minimum over y in R^{r-d} of the bounding quadratic with the first d
// coordinates fixed: x^T S x / 2 + beta.x + gamma.
struct Schur {
    std::vector<std::vector<LD>> S;
    std::vector<LD> beta;
    LD gamma = 0;

    LD eval(const std::vector<std::int64_t>& n) const {
        const std::size_t d = beta.size();
        LD v = gamma;
        for (std::size_t i = 0; i < d; ++i) {
            const LD xi = static_cast<LD>(n[i]);
            LD row = 0;
            for (std::size_t j = 0; j < d; ++j) row += S[i][j] * static_cast<LD>(n[j]);
            v += xi * (row / 2 + beta[i]);
        }
        return v;
    }
};

std::vector<Schur> schur_chain(const RMatrix& P, const std::vector<Frac>& B) {
    const std::size_t r = B.size();
    std::vector<std::vector<LD>> Pl(r, std::vector<LD>(r));
    std::vector<LD> Bl(r);
    for (std::size_t i = 0; i < r; ++i) {
        Bl[i] = static_cast<LD>(B[i].num()) / static_cast<LD>(B[i].den());
        for (std::size_t j = 0; j < r; ++j) Pl[i][j] = to_ld(P[i][j]);
    }
    std::vector<Schur> out(r + 1);
    for (std::size_t d = 0; d <= r; ++d) {
        const std::size_t m = r - d;
        Schur s;
        s.S.assign(d, std::vector<LD>(d));
        s.beta.assign(d, 0);
        std::vector<std::vector<LD>> Pyy(m, std::vector<LD>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) Pyy[i][j] = Pl[d + i][d + j];
        auto Yi = m ? inverse_ld(Pyy) : Pyy;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                LD v = Pl[i][j];
                for (std::size_t a = 0; a < m; ++a)
                    for (std::size_t b = 0; b < m; ++b) v -= Pl[i][d + a] * Yi[a][b] * Pl[d + b][j];
                s.S[i][j] = v;
            }
            LD v = Bl[i];
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) v -= Pl[i][d + a] * Yi[a][b] * Bl[d + b];
            s.beta[i] = v;
        }
        LD g = 0;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) g -= Bl[d + a] * Yi[a][b] * Bl[d + b] / 2;
        s.gamma = g;
        out[d] = std::move(s);
    }
    return out;
}

struct Engine {
    int r = 0;
    std::int64_t M = 1;
    std::vector<std::vector<std::int64_t>> q2;  // scaled: diag G_ii/2, upper G_ij
    std::vector<std::int64_t> b;                // scaled B
    std::vector<std::int64_t> dstep;            // d_i * M
    struct Mono {
        BigInt coef;
        std::vector<std::int64_t> lin;
        std::int64_t c = 0;
    };
    std::vector<Mono> monos;
    bool unit_coefs = true;
    std::vector<Schur> chain;
    std::int64_t TS = 0, offset = 0;
    std::int64_t cap = 0;
    bool prune = true;
    LD Tp = 0, slack = 0;
    std::int64_t root_len = 0;

    std::int64_t exact(const std::vector<std::int64_t>& n) const {
        __int128 e = 0;
        for (int i = 0; i < r; ++i) {
            e += static_cast<__int128>(b[i]) * n[i];
            for (int j = i; j < r; ++j) e += static_cast<__int128>(q2[i][j]) * n[i] * n[j];
        }
        if (e > std::numeric_limits<std::int64_t>::max() / 4 || e < std::numeric_limits<std::int64_t>::min() / 4)
            throw std::overflow_error("nahm_sum: exponent overflow");
        return static_cast<std::int64_t>(e);
    }

    // Buffer length needed below the bound lb (in units of q).
    std::int64_t len_for(LD lb) const {
        LD s = lb * static_cast<LD>(M) - 1 - slack * static_cast<LD>(M);
        std::int64_t f = static_cast<std::int64_t>(std::floor(s));
        return std::max<std::int64_t>(0, TS - std::max(f, offset));
    }
};

struct Worker {
    const Engine& E;
    std::vector<std::vector<BigInt>> bufs;
    std::vector<BigInt> acc;
    std::vector<std::int64_t> n;
    std::uint64_t nodes = 0, leaves = 0;

    explicit Worker(const Engine& e)
        : E(e), bufs(e.r, std::vector<BigInt>(e.root_len)), acc(std::max<std::int64_t>(0, e.TS - e.offset)), n(e.r, 0) {}

    static void divide(std::vector<BigInt>& buf, std::int64_t len, std::int64_t step) {
        for (std::int64_t s = step; s < len; ++s)
            if (sgn(buf[s - step]) != 0) mpz_add(buf[s].get_mpz_t(), buf[s].get_mpz_t(), buf[s - step].get_mpz_t());
    }

    void leaf(const std::vector<BigInt>& buf, std::int64_t len) {
        ++leaves;
        const std::int64_t e = E.exact(n);
        for (const auto& m : E.monos) {
            std::int64_t em = e + m.c;
            for (int i = 0; i < E.r; ++i) em += m.lin[i] * n[i];
            if (em >= E.TS) continue;
            if (em < E.offset || E.TS - em > len) throw std::logic_error("nahm_sum: enumeration bound violated");
            const std::int64_t lim = E.TS - em;
            BigInt* out = &acc[static_cast<std::size_t>(em - E.offset)];
            for (std::int64_t s = 0; s < lim; ++s) {
                if (sgn(buf[s]) == 0) continue;
                if (E.unit_coefs) mpz_add(out[s].get_mpz_t(), out[s].get_mpz_t(), buf[s].get_mpz_t());
                else mpz_addmul(out[s].get_mpz_t(), m.coef.get_mpz_t(), buf[s].get_mpz_t());
            }
        }
    }

    // Lower bound with coordinates 0..d fixed, as a function of n[d] = v.
    bool pruned(int d, LD& vertex) {
        const Schur& s = E.chain[d + 1];
        LD beta = s.beta[d];
        for (int j = 0; j < d; ++j) beta += s.S[d][j] * static_cast<LD>(n[j]);
        vertex = -beta / s.S[d][d];
        return E.prune && s.eval(n) >= E.Tp + E.slack;
    }

    // Enumerates coordinate d starting from v0 with buf holding the product
    // for n[d] = v0 already applied in bufs[d].
    void run_level(int d, std::int64_t len, std::int64_t v0, std::int64_t v1) {
        std::vector<BigInt>& buf = bufs[d];
        for (std::int64_t v = v0; v <= v1; ++v) {
            if (v > v0) divide(buf, len, E.dstep[d] * v);
            n[d] = v;
            ++nodes;
            LD vertex;
            if (pruned(d, vertex)) {
                if (static_cast<LD>(v) >= vertex) break;
                continue;
            }
            const std::int64_t child = E.prune ? std::min(len, E.len_for(E.chain[d + 1].eval(n))) : len;
            if (d + 1 == E.r) {
                leaf(buf, child);
            } else {
                std::vector<BigInt>& nb = bufs[d + 1];
                for (std::int64_t s = 0; s < child; ++s) nb[s] = buf[s];
                run_level(d + 1, child, 0, E.cap);
            }
        }
        n[d] = 0;
    }
};

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(int idx, Rational p)
    : std::invalid_argument("quadratic form is not positive definite: pivot " + std::to_string(idx + 1) + " is " +
                            rational_str(p)),
      index(idx),
      pivot(std::move(p)) {}

QuadrupleParseError::QuadrupleParseError(const std::string& msg, int l, int c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c) {}

LdltResult ldlt_pivots(const RMatrix& G) {
    const std::size_t n = G.size();
    RMatrix L(n, std::vector<Rational>(n));
    LdltResult res;
    for (std::size_t j = 0; j < n; ++j) {
        Rational d = G[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= L[j][k] * L[j][k] * res.pivots[k];
        res.pivots.push_back(d);
        if (sgn(d) <= 0) {
            res.ok = false;
            res.failed_at = static_cast<int>(j);
            return res;
        }
        for (std::size_t i = j + 1; i < n; ++i) {
            Rational s = G[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * L[j][k] * res.pivots[k];
            L[i][j] = s / d;
        }
    }
    return res;
}

Rational least_eigenvalue_lower_bound(const RMatrix& G, int iterations) {
    auto base = ldlt_pivots(G);
    if (!base.ok) throw NotPositiveDefinite(base.failed_at, base.pivots.back());
    Rational hi = G[0][0];
    for (std::size_t i = 1; i < G.size(); ++i) hi = std::min(hi, G[i][i]);
    Rational lo = 0;
    for (int it = 0; it < iterations || (sgn(lo) == 0 && it < 400); ++it) {
        Rational mid = (lo + hi) / 2;
        RMatrix H = G;
        for (std::size_t i = 0; i < G.size(); ++i) H[i][i] -= mid;
        if (ldlt_pivots(H).ok) lo = mid;
        else hi = mid;
    }
    return lo;
}

PuiseuxSeries expand_quadratic_sum(const QuadraticSum& s, const Frac& T, const NahmOptions& opt, NahmStats* stats) {
    const std::size_t r = s.B.size();
    if (r == 0) throw std::invalid_argument("nahm_sum: rank must be at least 1");
    if (is_infinite_order(T)) throw std::invalid_argument("nahm_sum: needs a finite order");
    require_square_symmetric(s.G, r, "nahm_sum");
    std::vector<std::int64_t> D = s.D.empty() ? std::vector<std::int64_t>(r, 1) : s.D;
    if (D.size() != r) throw std::invalid_argument("nahm_sum: D has the wrong length");
    for (auto d : D)
        if (d <= 0) throw std::invalid_argument("nahm_sum: D entries must be positive");
    std::vector<NumeratorMonomial> monos = s.numerator;
    if (monos.empty()) monos.push_back({});
    for (auto& m : monos) {
        if (m.linear.empty()) m.linear.assign(r, Frac(0));
        if (m.linear.size() != r) throw std::invalid_argument("nahm_sum: numerator monomial has the wrong length");
        for (const auto& x : m.linear)
            if (x < Frac(0)) throw std::invalid_argument("nahm_sum: numerator exponents must be nonnegative");
        if (m.constant < Frac(0)) throw std::invalid_argument("nahm_sum: numerator exponents must be nonnegative");
    }

    // Bounding form: G itself, or G minus its positive off-diagonal part, which
    // is below G on the nonnegative orthant.
    RMatrix G = to_rational(s.G);
    RMatrix P = G;
    auto cert = ldlt_pivots(G);
    if (!cert.ok) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (i != j && sgn(P[i][j]) > 0) P[i][j] = 0;
        if (!ldlt_pivots(P).ok) throw NotPositiveDefinite(cert.failed_at, cert.pivots.back());
    }
    const Rational lambda = least_eigenvalue_lower_bound(P);

    Engine E;
    E.r = static_cast<int>(r);
    E.prune = opt.prune;
    std::int64_t M = 1;
    for (std::size_t i = 0; i < r; ++i) {
        M = lcm64(M, (s.G[i][i] / Frac(2)).den());
        for (std::size_t j = i + 1; j < r; ++j) M = lcm64(M, s.G[i][j].den());
        M = lcm64(M, s.B[i].den());
    }
    for (const auto& m : monos) {
        for (const auto& x : m.linear) M = lcm64(M, x.den());
        M = lcm64(M, m.constant.den());
    }
    E.M = M;
    E.q2.assign(r, std::vector<std::int64_t>(r, 0));
    E.b.resize(r);
    E.dstep.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        E.q2[i][i] = (s.G[i][i] / Frac(2) * Frac(M)).num();
        for (std::size_t j = i + 1; j < r; ++j) E.q2[i][j] = (s.G[i][j] * Frac(M)).num();
        E.b[i] = (s.B[i] * Frac(M)).num();
        E.dstep[i] = D[i] * M;
    }
    BigInt coef_den = 1;
    for (const auto& m : monos) mpz_lcm(coef_den.get_mpz_t(), coef_den.get_mpz_t(), m.coef.get_den_mpz_t());
    for (const auto& m : monos) {
        Engine::Mono em;
        em.coef = m.coef.get_num() * (coef_den / m.coef.get_den());
        if (em.coef != 1) E.unit_coefs = false;
        for (const auto& x : m.linear) em.lin.push_back((x * Frac(M)).num());
        em.c = (m.constant * Frac(M)).num();
        E.monos.push_back(std::move(em));
    }

    const Frac Tp = T - s.C;
    E.Tp = static_cast<LD>(Tp.num()) / static_cast<LD>(Tp.den());
    E.slack = 1e-9L * (1 + std::fabs(E.Tp));
    E.TS = (Tp * Frac(M)).ceil();
    E.chain = schur_chain(P, s.B);
    const LD root_lb = E.chain[0].gamma;
    E.offset = std::min<std::int64_t>(0, static_cast<std::int64_t>(std::floor(root_lb * M - 1 - E.slack * M)));

    LD bnorm = 0;
    for (const auto& x : s.B) bnorm += std::fabs(static_cast<LD>(x.num()) / static_cast<LD>(x.den()));
    const LD lam = to_ld(lambda);
    const LD disc = bnorm * bnorm + 2 * lam * E.Tp;
    E.cap = disc < 0 ? -1 : static_cast<std::int64_t>(std::floor((bnorm + std::sqrt(disc)) / lam)) + 1;
    if (E.cap >= 0) E.cap *= std::max(1, opt.box_scale);
    if (E.cap > 10000000) throw std::overflow_error("nahm_sum: enumeration bound overflow");
    E.root_len = std::max<std::int64_t>(0, E.TS - E.offset);

    std::vector<BigInt> total(static_cast<std::size_t>(E.root_len));
    std::uint64_t nodes = 0, leaves = 0;
    if (E.cap >= 0 && E.root_len > 0) {
        // Candidate values of the first coordinate.
        std::int64_t last = E.cap;
        if (E.prune) {
            std::vector<std::int64_t> nn(r, 0);
            const Schur& s1 = E.chain[1];
            const LD vertex = -s1.beta[0] / s1.S[0][0];
            for (std::int64_t v = 0; v <= E.cap; ++v) {
                nn[0] = v;
                if (s1.eval(nn) >= E.Tp + E.slack && static_cast<LD>(v) >= vertex) {
                    last = v - 1;
                    break;
                }
            }
        }
        const double work = static_cast<double>(last + 1) * static_cast<double>(E.root_len) * (r > 1 ? 8.0 : 1.0);
        kernels::Exec exec = opt.exec;
        if (exec == kernels::Exec::Auto)
            exec = (work > 2e5 && omp_get_max_threads() > 1 && !omp_in_parallel()) ? kernels::Exec::Parallel : kernels::Exec::Serial;
        if (exec == kernels::Exec::Serial || last < 1) {
            Worker w(E);
            w.bufs[0][0] = 1;
            w.run_level(0, E.root_len, 0, last);
            total = std::move(w.acc);
            nodes = w.nodes;
            leaves = w.leaves;
        } else {
            const int nt = std::max(1, omp_get_max_threads());
            std::vector<std::vector<BigInt>> parts(nt);
            std::vector<std::uint64_t> pn(nt, 0), pl(nt, 0);
            std::string error;
#pragma omp parallel num_threads(nt)
            {
                const int t = omp_get_thread_num();
                Worker w(E);
#pragma omp for schedule(dynamic, 1)
                for (std::int64_t v = 0; v <= last; ++v) {
                    try {
                        auto& b0 = w.bufs[0];
                        for (auto& x : b0) x = 0;
                        b0[0] = 1;
                        for (std::int64_t k = 1; k <= v; ++k) Worker::divide(b0, E.root_len, E.dstep[0] * k);
                        w.run_level(0, E.root_len, v, v);
                    } catch (const std::exception& ex) {
#pragma omp critical
                        error = ex.what();
                    }
                }
                parts[t] = std::move(w.acc);
                pn[t] = w.nodes;
                pl[t] = w.leaves;
            }
            if (!error.empty()) throw std::logic_error(error);
            for (int t = 0; t < nt; ++t) {
                for (std::size_t i = 0; i < parts[t].size(); ++i) total[i] += parts[t][i];
                nodes += pn[t];
                leaves += pl[t];
            }
        }
    }
    if (stats) {
        stats->nodes = nodes;
        stats->leaves = leaves;
        stats->box = E.cap;
        stats->lambda = lambda;
    }

    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total.size()); ++i) {
        if (sgn(total[i]) == 0) continue;
        exps.push_back(i + E.offset);
        nums.push_back(std::move(total[i]));
    }
    BigInt den = coef_den * s.scalar.get_den();
    if (s.scalar.get_num() != 1)
        for (auto& x : nums) x *= s.scalar.get_num();
    SeriesLimits lim;
    lim.exponent_floor = std::min(Frac(-10), Frac(E.offset, M) + s.C - Frac(1));
    auto res = PuiseuxSeries::from_raw(Ring{}, M, std::move(exps), std::move(nums), den, Tp);
    return s.C == Frac(0) ? res : shift(res, s.C, lim);
}

FracMatrix NahmQuadruple::AD() const {
    const std::size_t r = B.size();
    FracMatrix G(r, std::vector<Frac>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) G[i][j] = A[i][j] * Frac(D.empty() ? 1 : D[j]);
    return G;
}

void NahmQuadruple::validate() const {
    const std::size_t r = B.size();
    if (r == 0) throw std::invalid_argument("quadruple: rank must be at least 1");
    if (A.size() != r) throw std::invalid_argument("quadruple: A must be " + std::to_string(r) + "x" + std::to_string(r));
    for (const auto& row : A)
        if (row.size() != r) throw std::invalid_argument("quadruple: A must be square");
    if (!D.empty() && D.size() != r) throw std::invalid_argument("quadruple: D has the wrong length");
    for (auto d : D)
        if (d <= 0) throw std::invalid_argument("quadruple: D entries must be positive");
    auto G = AD();
    require_square_symmetric(G, r, "quadruple (AD)");
    auto cert = ldlt_pivots(to_rational(G));
    if (!cert.ok) throw NotPositiveDefinite(cert.failed_at, cert.pivots.back());
}

NahmQuadruple NahmQuadruple::from_form(const FracMatrix& G, std::vector<Frac> B, Frac C, std::vector<std::int64_t> D) {
    NahmQuadruple q;
    const std::size_t r = B.size();
    q.A.assign(r, std::vector<Frac>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) q.A[i][j] = G[i][j] / Frac(D.empty() ? 1 : D[j]);
    q.B = std::move(B);
    q.C = C;
    q.D = std::move(D);
    return q;
}

PuiseuxSeries nahm_sum(const NahmQuadruple& quad, const Frac& T, const NahmOptions& opt, NahmStats* stats) {
    quad.validate();
    QuadraticSum s;
    s.G = quad.AD();
    s.B = quad.B;
    s.C = quad.C;
    s.D = quad.D;
    return expand_quadratic_sum(s, T, opt, stats);
}

Frac nahm_exponent(const NahmQuadruple& quad, const std::vector<std::int64_t>& n) {
    auto G = quad.AD();
    Frac e = quad.C;
    for (std::size_t i = 0; i < n.size(); ++i) {
        e += quad.B[i] * Frac(n[i]);
        for (std::size_t j = 0; j < n.size(); ++j) e += G[i][j] * Frac(n[i] * n[j], 2);
    }
    return e;
}

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t pos) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

NahmQuadruple parse_quadruple_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw QuadrupleParseError(e.what(), l, c);
    }
    auto where = [&](const std::string& key) {
        auto p = text.find("\"" + key + "\"");
        return line_col(text, p == std::string::npos ? 0 : p);
    };
    auto fail = [&](const std::string& key, const std::string& msg) {
        auto [l, c] = where(key);
        throw QuadrupleParseError(msg, l, c);
    };
    auto rational = [&](const json& v, const std::string& key) -> Frac {
        try {
            if (v.is_string()) return Frac::parse(v.get<std::string>());
            if (v.is_number_integer()) return Frac(v.get<std::int64_t>());
        } catch (const std::exception& e) {
            fail(key, std::string("bad rational: ") + e.what());
        }
        fail(key, "expected a rational as a \"p/q\" string or an integer");
        return {};
    };
    if (!j.is_object()) throw QuadrupleParseError("expected a JSON object", 1, 1);
    for (const char* key : {"A", "B"})
        if (!j.contains(key)) fail(key, std::string("missing key \"") + key + "\"");
    NahmQuadruple q;
    if (!j["A"].is_array()) fail("A", "A must be an array of rows");
    for (const auto& row : j["A"]) {
        if (!row.is_array()) fail("A", "A must be an array of rows");
        std::vector<Frac> r;
        for (const auto& x : row) r.push_back(rational(x, "A"));
        q.A.push_back(std::move(r));
    }
    if (!j["B"].is_array()) fail("B", "B must be an array");
    for (const auto& x : j["B"]) q.B.push_back(rational(x, "B"));
    if (j.contains("C")) q.C = rational(j["C"], "C");
    if (j.contains("D")) {
        if (!j["D"].is_array()) fail("D", "D must be an array of positive integers");
        for (const auto& x : j["D"]) {
            if (!x.is_number_integer()) fail("D", "D must be an array of positive integers");
            q.D.push_back(x.get<std::int64_t>());
        }
    }
    return q;
}

}  // namespace qmod
