#include "qmod/nahm.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace qmod {

namespace {

void require_range(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

FracMatrix int_matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    FracMatrix G;
    for (const auto& r : rows) {
        std::vector<Frac> row;
        for (auto x : r) row.emplace_back(x);
        G.push_back(std::move(row));
    }
    return G;
}

std::vector<Frac> fracs(std::initializer_list<Frac> xs) { return std::vector<Frac>(xs); }

// sum_j N_j^2 with N_j = n_j + ... + n_r, written as n^T G n / 2: G = 2 c min(a, b).
void add_tail_squares(FracMatrix& G, std::size_t first, std::size_t count, std::int64_t c) {
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b) G[first + a][first + b] += Frac(2 * c * static_cast<std::int64_t>(std::min(a, b) + 1));
}

// Andrews-Gordon type forms: N_1^2 + ... + N_{k-1}^2 + N_i + ... + N_{k-1}.
QuadraticSum tail_form(int k, int i, std::int64_t last_d) {
    const std::size_t r = static_cast<std::size_t>(k - 1);
    QuadraticSum s;
    s.G.assign(r, std::vector<Frac>(r, Frac(0)));
    add_tail_squares(s.G, 0, r, 1);
    s.B.assign(r, Frac(0));
    for (std::size_t a = 0; a < r; ++a) s.B[a] = Frac(std::max<std::int64_t>(0, static_cast<std::int64_t>(a) + 1 - i + 1));
    s.D.assign(r, 1);
    s.D.back() = last_d;
    return s;
}

// Dense rational accumulator for the nested sums below T (integer exponents).
struct DenseAcc {
    std::vector<Rational> c;
    explicit DenseAcc(std::int64_t T) : c(static_cast<std::size_t>(std::max<std::int64_t>(T, 0))) {}

    // Adds P / prod_j (q^2; q^2)_{m_j}.
    void add(const PuiseuxSeries& P, const std::vector<std::int64_t>& m) {
        if (P.is_zero()) return;
        if (P.order() < Frac(0)) throw std::logic_error("nested sum: a term has negative total exponent");
        const std::int64_t T = static_cast<std::int64_t>(c.size());
        std::vector<Rational> b(c.size());
        for (const auto& [e, v] : P.terms()) {
            if (!e.is_integer()) throw std::logic_error("nested sum: non-integral exponent");
            if (e.num() < T) b[e.num()] = v.rational_value();
        }
        for (auto mj : m)
            for (std::int64_t t = 1; t <= mj; ++t)
                for (std::int64_t s = 2 * t; s < T; ++s) b[s] += b[s - 2 * t];
        for (std::size_t s = 0; s < c.size(); ++s) c[s] += b[s];
    }

    PuiseuxSeries series() const {
        std::vector<std::int64_t> exps;
        std::vector<BigInt> nums;
        BigInt den = 1;
        for (const auto& x : c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t s = 0; s < c.size(); ++s) {
            if (sgn(c[s]) == 0) continue;
            exps.push_back(static_cast<std::int64_t>(s));
            nums.push_back(c[s].get_num() * (den / c[s].get_den()));
        }
        return PuiseuxSeries::from_raw(Ring{}, 1, std::move(exps), std::move(nums), den, Frac(static_cast<std::int64_t>(c.size())));
    }
};

// Enumerates n_1 >= n_2 >= ... >= n_{k-1} >= 0. low(n, depth) is the least
// exponent of any term extending the first `depth` coordinates, and must be
// nondecreasing in each coordinate; leaf(n) handles a full tuple.
void nested_enumerate(int k, std::int64_t T, const std::function<std::int64_t(const std::vector<std::int64_t>&, int)>& low,
                      const std::function<void(const std::vector<std::int64_t>&)>& leaf) {
    const int r = k - 1;
    std::vector<std::int64_t> n(r, 0);
    std::function<void(int)> rec = [&](int d) {
        if (d == r) {
            leaf(n);
            return;
        }
        const std::int64_t hi = d == 0 ? std::numeric_limits<std::int64_t>::max() : n[d - 1];
        for (std::int64_t v = 0; v <= hi; ++v) {
            n[d] = v;
            if (low(n, d + 1) >= T) break;
            rec(d + 1);
        }
        n[d] = 0;
    };
    if (r == 0) {
        leaf(n);
        return;
    }
    rec(0);
}

SeriesLimits wide_limits(std::int64_t n1) {
    SeriesLimits lim;
    lim.exponent_floor = Frac(-(2 * n1 * n1 + 2 * n1 + 10));
    return lim;
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

}  // namespace

QuadraticSum andrews_gordon_form(int k, int i) {
    require_range(k >= 2 && i >= 1 && i <= k, "Andrews-Gordon sum: need k >= 2 and 1 <= i <= k");
    return tail_form(k, i, 1);
}

QuadraticSum bressoud_form(int k, int i) {
    require_range(k >= 2 && i >= 1 && i <= k, "Bressoud sum: need k >= 2 and 1 <= i <= k");
    return tail_form(k, i, 2);
}

QuadraticSum capparelli_form(int which) {
    require_range(which == 1 || which == 2, "Capparelli sum: which must be 1 or 2");
    QuadraticSum s;
    s.G = int_matrix({{4, 6}, {6, 12}});
    s.D = {1, 3};
    if (which == 1) {
        s.B = fracs({0, 0});
    } else {
        // q^{2n1^2+6n1n2+6n2^2+n1+3n2} (1 + q^{2n1+3n2+1})
        s.B = fracs({1, 3});
        s.numerator = {{1, {}, 0}, {1, fracs({2, 3}), 1}};
    }
    return s;
}

QuadraticSum kanade_russell_form(int which) {
    require_range(which >= 1 && which <= 3, "Kanade-Russell sum: which must be 1, 2 or 3");
    QuadraticSum s;
    s.G = int_matrix({{2, 3}, {3, 6}});
    s.D = {1, 3};
    static const std::int64_t lin[3][2] = {{0, 0}, {1, 3}, {2, 3}};
    s.B = fracs({lin[which - 1][0], lin[which - 1][1]});
    return s;
}

PuiseuxSeries andrews_gordon_sum(int k, int i, const Frac& T, const NahmOptions& opt) {
    return expand_quadratic_sum(andrews_gordon_form(k, i), T, opt);
}
PuiseuxSeries bressoud_sum(int k, int i, const Frac& T, const NahmOptions& opt) {
    return expand_quadratic_sum(bressoud_form(k, i), T, opt);
}
PuiseuxSeries capparelli_sum(int which, const Frac& T, const NahmOptions& opt) {
    return expand_quadratic_sum(capparelli_form(which), T, opt);
}
PuiseuxSeries kanade_russell_sum(int which, const Frac& T, const NahmOptions& opt) {
    return expand_quadratic_sum(kanade_russell_form(which), T, opt);
}

PuiseuxSeries bressoud_4k_sum(int k, int i, const Frac& T) {
    require_range(k >= 2 && i >= 1 && i <= k, "Bressoud 4k sum: need k >= 2 and 1 <= i <= k");
    if (!T.is_integer() || T < Frac(0)) throw std::invalid_argument("Bressoud 4k sum: order must be a nonnegative integer");
    const std::int64_t TT = T.num();
    // exponent 2(n_1^2 + ... + n_{k-1}^2 + n_i + ... + n_{k-1}); the prefactor
    // (-q^{1-2n_1}; q^2)_{n_1} has least exponent -n_1^2.
    auto expo = [&](const std::vector<std::int64_t>& n, int depth) {
        std::int64_t e = 0;
        for (int j = 0; j < depth; ++j) e += 2 * n[j] * n[j] + (j + 1 >= i ? 2 * n[j] : 0);
        return e;
    };
    DenseAcc acc(TT);
    nested_enumerate(
        k, TT, [&](const std::vector<std::int64_t>& n, int depth) { return expo(n, depth) - n[0] * n[0]; },
        [&](const std::vector<std::int64_t>& n) {
            const std::int64_t n1 = n.empty() ? 0 : n[0];
            auto lim = wide_limits(n1);
            const std::int64_t E = expo(n, k - 1);
            auto pre = pochhammer(Frac(1 - 2 * n1), CycloElement::integer(-1), 2, n1, Frac(TT - E), lim);
            auto term = shift(pre, Frac(E), lim);
            std::vector<std::int64_t> m;
            for (int j = 0; j + 1 < k; ++j) m.push_back(n[j] - (j + 2 < k ? n[j + 1] : 0));
            acc.add(term, m);
        });
    return acc.series();
}

PuiseuxSeries overpartition_bressoud_sum(int k, int i, const Frac& T) {
    require_range(k >= 2 && i >= 1 && i <= k, "overpartition Bressoud sum: need k >= 2 and 1 <= i <= k");
    if (!T.is_integer() || T < Frac(0)) throw std::invalid_argument("overpartition Bressoud sum: order must be a nonnegative integer");
    const std::int64_t TT = T.num();
    // exponent 2(n_1^2 + ... + n_{k-1}^2 + n_{i+1} + ... + n_{k-1})
    auto expo = [&](const std::vector<std::int64_t>& n, int depth) {
        std::int64_t e = 0;
        for (int j = 0; j < depth; ++j) e += 2 * n[j] * n[j] + (j + 1 >= i + 1 ? 2 * n[j] : 0);
        return e;
    };
    // Least exponents of the prefactors: -n_1(n_1 - 1) and -n_1^2.
    auto low = [&](const std::vector<std::int64_t>& n, int depth) {
        return expo(n, depth) - n[0] * (n[0] - 1) - n[0] * n[0];
    };
    DenseAcc acc(TT);
    nested_enumerate(k, TT, low, [&](const std::vector<std::int64_t>& n) {
        const std::int64_t n1 = n.empty() ? 0 : n[0];
        auto lim = wide_limits(n1);
        const auto minus_one = CycloElement::integer(-1);
        const std::int64_t E = expo(n, k - 1);
        // each prefactor is needed only up to the order left over by the other
        // one's lowest exponent
        // (a; q^2)_{-1} = 1 / (1 - a q^{-2}) = 1/2 for a = -q^2.
        PuiseuxSeries a = n1 == 0 ? PuiseuxSeries::term(0, Rational(1, 2))
                                  : pochhammer(Frac(2 - 2 * n1), minus_one, 2, n1 - 1, Frac(TT - E + n1 * n1), lim);
        auto b = pochhammer(Frac(1 - 2 * n1), minus_one, 2, n1, Frac(TT - E + n1 * (n1 - 1)), lim);
        // n_k := 0
        const std::int64_t ni = i <= k - 1 ? n[i - 1] : 0;
        auto c = ni == 0 ? PuiseuxSeries::term(0, 2) : PuiseuxSeries::one() + PuiseuxSeries::term(Frac(2 * ni));
        auto term = truncate(shift(mul(mul(a, b, lim), c, lim), Frac(E), lim), Frac(TT));
        std::vector<std::int64_t> m;
        for (int j = 0; j + 1 < k; ++j) m.push_back(n[j] - (j + 2 < k ? n[j + 1] : 0));
        acc.add(term, m);
    });
    return acc.series();
}

QuadraticSum example_form(const std::string& id, int k, int i) {
    QuadraticSum s;
    if (id == "ex1") {
        // N_1^2 + ... + N_k^2 + 2N_i + 2N_{i+2} + ..., denominators (q^2;q^2) and (q^4;q^4)_{n_k}
        require_range(k >= 2 && i >= 1 && i <= k + 1, "ex1: need k >= 2 and 1 <= i <= k+1");
        const std::size_t r = static_cast<std::size_t>(k);
        s.G.assign(r, std::vector<Frac>(r, Frac(0)));
        add_tail_squares(s.G, 0, r, 1);
        s.B.assign(r, Frac(0));
        for (int a = 1; a <= k; ++a)
            for (int j = i; j <= a; j += 2) s.B[a - 1] += Frac(2);
        s.D.assign(r, 2);
        s.D.back() = 4;
        return s;
    }
    if (id == "ex2") {
        // binom(m1+1,2) + m1 m2 + 2 binom(m2+1,2) + 2 m2 n1 + 4(N_1^2+...+N_k^2) + 4(N_i+...+N_k)
        require_range(k >= 1 && i >= 1 && i <= k + 1, "ex2: need k >= 1 and 1 <= i <= k+1");
        const std::size_t r = static_cast<std::size_t>(k) + 2;
        s.G.assign(r, std::vector<Frac>(r, Frac(0)));
        s.G[0][0] = 1;
        s.G[0][1] = s.G[1][0] = 1;
        s.G[1][1] = 2;
        s.G[1][2] = s.G[2][1] = 2;
        add_tail_squares(s.G, 2, static_cast<std::size_t>(k), 4);
        s.B.assign(r, Frac(0));
        s.B[0] = Frac(1, 2);
        s.B[1] = 1;
        for (int a = 1; a <= k; ++a) s.B[a + 1] = Frac(4 * std::max(0, a - i + 1));
        s.D.assign(r, 4);
        s.D[0] = s.D[1] = 1;
        s.D[2] = 2;
        return s;
    }

    struct Fixed {
        FracMatrix G;
        std::vector<std::int64_t> D;
        std::vector<Frac> B;
        Rational scalar = 1;
    };
    // Quadratic parts as displayed, e.g. 3i^2+2j^2+k^2+4ij+2ik+2jk -> G = [[6,4,2],[4,4,2],[2,2,2]].
    static const std::map<std::string, Fixed> table = [] {
        std::map<std::string, Fixed> t;
        const auto g111 = int_matrix({{6, 4, 2}, {4, 4, 2}, {2, 2, 2}});
        t["111-mod5-x1"] = {g111, {2, 2, 2}, fracs({0, 0, 0})};
        t["111-mod5-x2"] = {g111, {2, 2, 2}, fracs({2, 2, 0})};
        t["111-mod5-x3"] = {g111, {2, 2, 2}, fracs({1, 0, 1})};
        t["111-mod5-x4"] = {g111, {2, 2, 2}, fracs({3, 2, 1})};
        const auto g20 = int_matrix({{1, 2, 2}, {2, 10, 8}, {2, 8, 8}});
        t["mod20-x1"] = {g20, {1, 2, 2}, fracs({Frac(1, 2), 0, 0})};
        t["mod20-x2"] = {g20, {1, 2, 2}, fracs({Frac(1, 2), 4, 4})};
        const auto g5 = int_matrix({{4, 2, 2}, {2, 2, 1}, {2, 1, 2}});
        t["mod5-x1"] = {g5, {1, 1, 1}, fracs({0, 0, 0})};
        t["mod5-x2"] = {g5, {1, 1, 1}, fracs({2, 1, 1})};
        t["mod5-x3"] = {g5, {1, 1, 1}, fracs({1, 1, 0})};
        const auto g22 = int_matrix({{2, -2}, {-2, 4}});
        t["22-x1"] = {g22, {2, 2}, fracs({0, 0})};
        t["22-x2"] = {g22, {2, 2}, fracs({0, 2})};
        t["24-x1"] = {g22, {2, 4}, fracs({0, 0})};
        t["24-x2"] = {g22, {2, 4}, fracs({0, 2})};
        const auto g222 = int_matrix({{4, 2, -2}, {2, 2, 0}, {-2, 0, 2}});
        t["222-x1"] = {g222, {2, 2, 2}, fracs({0, 0, 1})};
        t["222-x2"] = {g222, {2, 2, 2}, fracs({2, 2, -1}), Rational(1, 2)};
        t["222-x3"] = {g222, {2, 2, 2}, fracs({0, 1, 0})};
        t["222-x4"] = {g222, {2, 2, 2}, fracs({2, 1, 0})};
        const auto g12 = int_matrix({{8, 4, -2}, {4, 4, -2}, {-2, -2, 2}});
        t["mod12-x1"] = {g12, {2, 2, 2}, fracs({0, 0, 0})};
        t["mod12-x2"] = {g12, {2, 2, 2}, fracs({2, 0, 0})};
        t["mod12-x3"] = {g12, {2, 2, 2}, fracs({4, 2, 0})};
        const auto g8 = int_matrix({{1, 1, 0}, {1, 4, 2}, {0, 2, 2}});
        t["mod8-x1"] = {g8, {1, 1, 2}, fracs({Frac(1, 2), 0, 0})};
        t["mod8-x2"] = {g8, {1, 1, 2}, fracs({Frac(1, 2), 2, 2})};
        const auto g48 = int_matrix({{4, -4}, {-4, 6}});
        t["48-x1"] = {g48, {4, 8}, fracs({-2, 2})};
        t["48-x2"] = {g48, {4, 8}, fracs({-2, 4})};
        return t;
    }();
    auto it = table.find(id);
    if (it == table.end()) throw std::invalid_argument("unknown example sum: " + id);
    s.G = it->second.G;
    s.D = it->second.D;
    s.B = it->second.B;
    s.scalar = it->second.scalar;
    return s;
}

std::vector<std::string> example_ids() {
    return {"ex1",      "ex2",      "111-mod5-x1", "111-mod5-x2", "111-mod5-x3", "111-mod5-x4", "mod20-x1", "mod20-x2",
            "mod5-x1",  "mod5-x2",  "mod5-x3",     "22-x1",       "22-x2",       "24-x1",       "24-x2",    "222-x1",
            "222-x2",   "222-x3",   "222-x4",      "mod12-x1",    "mod12-x2",    "mod12-x3",    "mod8-x1",  "mod8-x2",
            "48-x1",    "48-x2"};
}

PuiseuxSeries example_sum(const std::string& id, const Frac& T, int k, int i, const NahmOptions& opt) {
    return expand_quadratic_sum(example_form(id, k, i), T, opt);
}

SumFamilySpec parse_family(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    if (tok.empty()) throw std::invalid_argument("empty family name");
    SumFamilySpec s;
    std::vector<std::string> rest;
    for (std::size_t a = 1; a < tok.size(); ++a) {
        const std::string t = lower(tok[a]);
        if (t.rfind("k=", 0) == 0) s.k = std::stoi(t.substr(2));
        else if (t.rfind("i=", 0) == 0) s.i = std::stoi(t.substr(2));
        else rest.push_back(tok[a]);
    }
    auto which = [&](const std::string& prefix) {
        if (rest.size() != 1) throw std::invalid_argument("expected one index after " + tok[0]);
        std::string w = lower(rest[0]);
        if (!prefix.empty() && w.rfind(prefix, 0) == 0) w = w.substr(prefix.size());
        return std::stoi(w);
    };
    const std::string f = lower(tok[0]);
    if (f == "ag" || f == "andrews-gordon") {
        s.family = SumFamily::AndrewsGordon;
    } else if (f == "bressoud") {
        s.family = SumFamily::Bressoud;
    } else if (f == "capparelli") {
        s.family = SumFamily::Capparelli;
        s.which = which("a");
    } else if (f == "kr" || f == "kanade-russell") {
        s.family = SumFamily::KanadeRussell;
        s.which = which("b");
    } else if (f == "b4k" || f == "bressoud-4k") {
        s.family = SumFamily::Bressoud4k;
    } else if (f == "ovb" || f == "overpartition-bressoud") {
        s.family = SumFamily::OverpartitionBressoud;
    } else if (f == "example") {
        s.family = SumFamily::Example;
        if (rest.size() != 1) throw std::invalid_argument("expected an example id");
        s.example = lower(rest[0]);
    } else {
        throw std::invalid_argument("unknown family: " + tok[0]);
    }
    return s;
}

PuiseuxSeries expand_family(const SumFamilySpec& s, const Frac& T, const NahmOptions& opt) {
    switch (s.family) {
        case SumFamily::AndrewsGordon: return andrews_gordon_sum(s.k, s.i, T, opt);
        case SumFamily::Bressoud: return bressoud_sum(s.k, s.i, T, opt);
        case SumFamily::Capparelli: return capparelli_sum(s.which, T, opt);
        case SumFamily::KanadeRussell: return kanade_russell_sum(s.which, T, opt);
        case SumFamily::Bressoud4k: return bressoud_4k_sum(s.k, s.i, T);
        case SumFamily::OverpartitionBressoud: return overpartition_bressoud_sum(s.k, s.i, T);
        case SumFamily::Example: return example_sum(s.example, T, s.k, s.i, opt);
        case SumFamily::Raw: return nahm_sum(s.raw, T, opt);
    }
    throw std::logic_error("expand_family: unreachable");
}

}  // namespace qmod
