#include "qmod/identities.hpp"

#include "qmod/nahm.hpp"
#include "qmod/products.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qmod {

std::string status_str(IdentityStatus s) { return s == IdentityStatus::Proved ? "proved" : "conjectural"; }

namespace {

ProductSpec P(std::initializer_list<std::int64_t> as, std::int64_t m, int power = 1) { return pochs(as, m, 1, power); }
ProductSpec Pm(std::initializer_list<std::int64_t> as, std::int64_t m) { return pochs(as, m, -1, 1); }
ProductSpec Pv(const std::vector<std::int64_t>& as, std::int64_t m, int power = 1) {
    ProductSpec s;
    for (auto a : as) s.factors.push_back({Frac(a), Frac(m), 1, power, std::nullopt});
    return s;
}
ProductSpec J(std::int64_t m, int power) { return jm(m, power); }
ProductSpec scaled(ProductSpec s, Rational c) {
    s.scalar *= c;
    return s;
}

SeriesRecipe product(ProductSpec s) {
    return [s](const Frac& T) { return s.build(T); };
}

int order_for_rank(int rank) { return rank <= 1 ? 200 : rank == 2 ? 60 : 40; }

IdentityCase make(std::string name, std::string anchor, int rank, SeriesRecipe left, SeriesRecipe right,
                  std::vector<std::string> tags = {}) {
    IdentityCase c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.rank = rank;
    c.default_order = order_for_rank(rank);
    c.left = std::move(left);
    c.right = std::move(right);
    c.tags = std::move(tags);
    return c;
}

// sum over n in Z of (-s)^n q^{m n(n-1)/2 + a n}, summed directly.
PuiseuxSeries jtp_sum(std::int64_t m, std::int64_t a, int s, const Frac& T) {
    std::map<std::int64_t, BigInt> coef;
    const std::int64_t top = T.ceil();
    for (std::int64_t n = -4 * (top + a + 2); n <= 4 * (top + a + 2); ++n) {
        std::int64_t e = m * n * (n - 1) / 2 + a * n;
        if (e >= top || e < -top) continue;
        int sign = (n % 2 == 0) ? 1 : -1;
        if (s < 0) sign = 1;  // (-(-1))^n
        coef[e] += sign;
    }
    std::vector<std::int64_t> exps;
    std::vector<BigInt> nums;
    for (auto& [e, c] : coef) {
        if (c == 0) continue;
        exps.push_back(e);
        nums.push_back(c);
    }
    return PuiseuxSeries::from_raw(Ring{}, 1, exps, nums, 1, T);
}

// J_{a,27} with the z-dependent coefficients of the 3-dissection of the crank
// generating function.
PuiseuxSeries crank_dissection_rhs(const CycloElement& z, const Frac& T) {
    const int n = z.conductor();
    auto j27 = [&](std::int64_t a, std::int64_t b) {
        return to_ring(P({a, 27 - a, 27}, 27).times(P({b, 27 - b, 27}, 27)).times(J(27, -1)).build(T), n);
    };
    const CycloElement one = CycloElement::integer(1, n);
    auto z2 = z * z, z4 = z2 * z2, z5 = z4 * z;
    auto c1 = -(one - z + z2 + z5);
    auto c2 = z2 - z - z4;
    auto t0 = j27(6, 12);
    auto t1 = shift(scale(j27(3, 12), c1), 1);
    auto t2 = shift(scale(j27(3, 6), c2), 2);
    return truncate(t0 + t1 + t2, T);
}

EtaQuotientSpec eta_q(std::initializer_list<std::pair<Frac, int>> fs) {
    EtaQuotientSpec s;
    for (auto& [m, e] : fs) s.factors.push_back({m, e});
    return s;
}

// Product sides of the application examples.
const std::map<std::string, ProductSpec>& example_products() {
    static const std::map<std::string, ProductSpec> m = [] {
        std::map<std::string, ProductSpec> r;
        r["111-mod5-x1"] = Pm({1}, 2).times(P({2, 8}, 10, -1));
        r["111-mod5-x2"] = Pm({1}, 2).times(P({4, 6}, 10, -1));
        r["111-mod5-x3"] = Pm({2}, 2).times(P({2, 8}, 10, -1));
        r["111-mod5-x4"] = Pm({2}, 2).times(P({4, 6}, 10, -1));
        r["mod20-x1"] = Pm({1}, 1).times(P({4, 16}, 20, -1));
        r["mod20-x2"] = Pm({1}, 1).times(P({8, 12}, 20, -1));
        r["mod5-x1"] = P({1, 4}, 5, -2);
        r["mod5-x2"] = P({2, 3}, 5, -2);
        r["mod5-x3"] = J(5, 1).times(J(1, -1));
        r["22-x1"] = J(2, 3).times(P({3, 5, 8}, 8)).times(J(1, -2)).times(J(4, -2));
        r["22-x2"] = J(2, 3).times(P({1, 7, 8}, 8)).times(J(1, -2)).times(J(4, -2));
        r["24-x1"] = J(2, 3).times(J(3, 2)).times(J(1, -2)).times(J(4, -2)).times(J(6, -1));
        r["24-x2"] = J(2, 2).times(J(6, 2)).times(J(1, -1)).times(J(3, -1)).times(J(4, -2));
        r["222-x1"] = J(3, 2).times(J(4, 1)).times(J(1, -1)).times(J(2, -1)).times(J(6, -1));
        r["222-x2"] = J(4, 1).times(J(6, 2)).times(J(2, -2)).times(J(3, -1));
        r["222-x3"] = J(2, 2).times(J(3, 2)).times(J(1, -2)).times(J(4, -1)).times(J(6, -1));
        r["222-x4"] = J(2, 1).times(J(6, 2)).times(J(1, -1)).times(J(3, -1)).times(J(4, -1));
        r["mod12-x1"] = J(2, 3).times(P({5, 7, 12}, 12)).times(J(1, -2)).times(J(4, -2));
        r["mod12-x2"] = J(2, 3).times(P({3, 9, 12}, 12)).times(J(1, -2)).times(J(4, -2));
        r["mod12-x3"] = J(2, 3).times(P({1, 11, 12}, 12)).times(J(1, -2)).times(J(4, -2));
        r["mod8-x1"] = Pm({1}, 1).times(P({1, 4, 7}, 8, -1));
        r["mod8-x2"] = Pm({1}, 1).times(P({3, 4, 5}, 8, -1));
        // (-1; q^4) = 2 (-q^4; q^4)
        r["48-x1"] = scaled(Pm({4}, 4).times(P({2, 3, 5}, 5)).times(P({1, 3, 4}, 4, -1)), 2);
        r["48-x2"] = scaled(Pm({4}, 4).times(P({1, 4, 5}, 5)).times(P({1, 3, 4}, 4, -1)), 2);
        return r;
    }();
    return m;
}

const char* example_anchor(const std::string& id) {
    if (id.rfind("111-mod5", 0) == 0) return "rank three sums x1..x4 with products modulo 10";
    if (id.rfind("mod20", 0) == 0) return "rank three sums with products modulo 20";
    if (id.rfind("mod5", 0) == 0) return "rank three sums with squared Rogers-Ramanujan products";
    if (id.rfind("22-", 0) == 0) return "rank two sums with products modulo 8";
    if (id.rfind("24-", 0) == 0) return "rank two sums with J_1, J_2, J_3, J_4, J_6 quotients";
    if (id.rfind("222-", 0) == 0) return "four rank three sums with a positive semidefinite form";
    if (id.rfind("mod12", 0) == 0) return "rank three sums with products modulo 12";
    if (id.rfind("mod8", 0) == 0) return "rank three sums with products modulo 8";
    if (id.rfind("48-", 0) == 0) return "rank two sums of the level 8 example";
    return "application example";
}

std::vector<IdentityCase> build() {
    std::vector<IdentityCase> R;
    auto nahm1 = [](Frac B) {
        return [B](const Frac& T) {
            NahmQuadruple q{{{Frac(2)}}, {B}, Frac(0), {1}};
            return nahm_sum(q, T);
        };
    };
    R.push_back(make("RR1", "Rogers-Ramanujan, G(q)", 1, nahm1(0), product(P({1, 4}, 5, -1)), {"rogers-ramanujan"}));
    R.push_back(make("RR2", "Rogers-Ramanujan, H(q)", 1, nahm1(1), product(P({2, 3}, 5, -1)), {"rogers-ramanujan"}));

    for (int k = 2; k <= 5; ++k)
        for (int i = 1; i <= k; ++i) {
            const int M = 2 * k + 1;
            R.push_back(make("AG-k" + std::to_string(k) + "-i" + std::to_string(i),
                             "Andrews-Gordon, odd modulus 2k+1", k - 1,
                             [k, i](const Frac& T) { return andrews_gordon_sum(k, i, T); },
                             product(Pv({i, M - i, M}, M).times(J(1, -1))), {"andrews-gordon"}));
        }
    for (int k = 2; k <= 5; ++k)
        for (int i = 1; i <= k; ++i) {
            const int M = 2 * k;
            R.push_back(make("Bressoud-k" + std::to_string(k) + "-i" + std::to_string(i),
                             "Bressoud, even modulus 2k", k - 1,
                             [k, i](const Frac& T) { return bressoud_sum(k, i, T); },
                             product(Pv({i, M - i, M}, M).times(J(1, -1))), {"bressoud"}));
        }
    R.push_back(make("Capparelli-1", "Capparelli, first identity", 2,
                     [](const Frac& T) { return capparelli_sum(1, T); }, product(Pm({2, 3, 4, 6}, 6)),
                     {"capparelli"}));
    R.push_back(make("Capparelli-2", "Capparelli, second identity", 2,
                     [](const Frac& T) { return capparelli_sum(2, T); }, product(Pm({1, 3, 5, 6}, 6)),
                     {"capparelli"}));
    {
        const std::vector<std::vector<std::int64_t>> kr = {{1, 3, 6, 8}, {2, 3, 6, 7}, {3, 4, 5, 6}};
        for (int w = 1; w <= 3; ++w) {
            auto c = make("KR-" + std::to_string(w), "Kanade-Russell mod 9, sum b" + std::to_string(w), 2,
                          [w](const Frac& T) { return kanade_russell_sum(w, T); },
                          product(Pv(kr[static_cast<std::size_t>(w - 1)], 9, -1)), {"kanade-russell"});
            c.status = IdentityStatus::Conjectural;
            R.push_back(c);
        }
    }
    for (int j : {1, 2, 4}) {
        std::string zs = j == 1 ? "zeta9" : "zeta9^" + std::to_string(j);
        auto c = make("crank-3dissect-z=" + zs, "3-dissection of the crank generating function at a primitive 9th root",
                      0, [j](const Frac& T) { return crank_gf(CycloElement::zeta(9, j), T); },
                      [j](const Frac& T) { return crank_dissection_rhs(CycloElement::zeta(9, j), T); },
                      {"crank", "cyclotomic"});
        c.conductor = 9;
        c.default_order = 60;
        R.push_back(c);
    }
    {
        auto j = [](std::initializer_list<std::pair<int, int>> fs) {
            ProductSpec s;
            for (auto [m, e] : fs) s.times(jm(m, e));
            return s;
        };
        ProductSpec e1 = j({{4, 1}, {6, 1}, {16, 1}, {24, 2}, {2, -2}, {8, -1}, {12, -1}, {48, -1}});
        ProductSpec o1 = j({{4, 1}, {6, 1}, {8, 2}, {48, 1}, {2, -2}, {4, -1}, {16, -1}, {24, -1}});
        ProductSpec e2 = j({{2, 1}, {12, 1}, {16, 1}, {24, 2}, {6, -2}, {8, -1}, {12, -1}, {48, -1}});
        ProductSpec o2 = j({{2, 1}, {12, 1}, {8, 2}, {48, 1}, {4, -1}, {6, -2}, {16, -1}, {24, -1}});
        o1.prefactor = 1;
        o2.prefactor = 1;
        o2.scalar = -1;
        R.push_back(make("J-id-1", "2-dissection of J3/J1", 0, product(J(3, 1).times(J(1, -1))),
                         [e1, o1](const Frac& T) { return e1.build(T) + o1.build(T); }, {"dissection"}));
        R.push_back(make("J-id-2", "2-dissection of J1/J3", 0, product(J(1, 1).times(J(3, -1))),
                         [e2, o2](const Frac& T) { return e2.build(T) + o2.build(T); }, {"dissection"}));

        const Frac t(1, 3), tt(2, 3), ft(4, 3);
        auto r1 = eta_q({{ft, 1}, {2, 2}, {tt, -1}, {1, -1}, {4, -1}});
        auto r2 = eta_q({{tt, 2}, {4, 1}, {t, -1}, {ft, -1}, {2, -1}});
        auto l1 = eta_q({{Frac(1, 4), 1}, {Frac(1, 6), 2}, {Frac(1, 2), -1}, {t, -1}, {Frac(1, 12), -1}});
        auto l2 = eta_q({{Frac(1, 2), 2}, {Frac(1, 12), 1}, {1, -1}, {Frac(1, 4), -1}, {Frac(1, 6), -1}});
        R.push_back(make("id-1", "eta-quotient form of the J3/J1 dissection", 0,
                         [l1](const Frac& T) { return eta_quotient(l1, T); },
                         [r1, r2](const Frac& T) { return eta_quotient(r1, T) + eta_quotient(r2, T); },
                         {"dissection", "eta"}));
        R.push_back(make("id-2", "eta-quotient form of the J1/J3 dissection", 0,
                         [l2](const Frac& T) { return eta_quotient(l2, T); },
                         [r1, r2](const Frac& T) { return eta_quotient(r1, T) - eta_quotient(r2, T); },
                         {"dissection", "eta"}));
    }
    for (int k = 2; k <= 4; ++k)
        for (int i = 1; i <= k; ++i) {
            const int M = 4 * k, N = 4 * k - 2;
            R.push_back(make("B4k-k" + std::to_string(k) + "-i" + std::to_string(i),
                             "Bressoud, modulus 4k with (q^2;q^4)", k - 1,
                             [k, i](const Frac& T) { return bressoud_4k_sum(k, i, T); },
                             product(P({2}, 4).times(Pv({2 * i - 1, M - 2 * i + 1, M}, M)).times(J(1, -1))),
                             {"bressoud-4k"}));
            auto h = make("OvB-k" + std::to_string(k) + "-i" + std::to_string(i),
                          "sums with (-q;q) and modulus 4k-2", k - 1,
                          [k, i](const Frac& T) { return overpartition_bressoud_sum(k, i, T); },
                          product(Pm({1}, 1).times(Pv({2 * i - 1, N + 1 - 2 * i, N}, N)).times(J(1, -1))),
                          {"overpartition"});
            h.default_order = std::min(h.default_order, 100);  // the two prefactors grow quadratically
            R.push_back(h);
        }
    for (const auto& [id, prod] : example_products()) {
        const int rank = static_cast<int>(example_form(id).B.size());
        R.push_back(make(id, example_anchor(id), rank, [id](const Frac& T) { return example_sum(id, T); },
                         product(prod), {"example"}));
    }
    for (int k = 2; k <= 4; ++k)
        for (int i = 1; i <= k + 1; ++i) {
            const int M = 2 * k + 3;
            R.push_back(make("ex1-k" + std::to_string(k) + "-i" + std::to_string(i),
                             "sums with (q^2;q^2) and (q^4;q^4) denominators, modulus 2k+3", k,
                             [k, i](const Frac& T) { return example_sum("ex1", T, k, i); },
                             product(Pm({1}, 2).times(Pv({i, M - i, M}, M)).times(P({2}, 2, -1))), {"example"}));
        }
    for (int k = 1; k <= 3; ++k)
        for (int i = 1; i <= k + 1; ++i) {
            const int M = 8 * k + 12;
            R.push_back(make("ex2-k" + std::to_string(k) + "-i" + std::to_string(i),
                             "sums with products modulo 8k+12", k + 2,
                             [k, i](const Frac& T) { return example_sum("ex2", T, k, i); },
                             product(Pv({4 * i, M - 4 * i, M}, M).times(J(1, -1))), {"example"}));
        }
    struct Jtp {
        const char* name;
        std::int64_t m, a;
        int s;
    };
    for (const Jtp& t : {Jtp{"JTP-zq2", 2, 1, 1}, Jtp{"JTP-z-q2", 2, 1, -1}, Jtp{"JTP-zq3", 3, 1, 1},
                         Jtp{"JTP-zq5", 5, 1, 1}, Jtp{"JTP-zq^2q5", 5, 2, 1}}) {
        // z = s q^a with q -> q^m: (z, q^m/z, q^m; q^m) = sum (-s)^n q^{m n(n-1)/2 + a n}
        ProductSpec p = t.s > 0 ? Pv({t.a, t.m - t.a, t.m}, t.m)
                                : pochs({t.a, t.m - t.a}, t.m, -1, 1).times(J(t.m, 1));
        R.push_back(make(t.name, "Jacobi triple product specialization", 0, product(p),
                         [t](const Frac& T) { return jtp_sum(t.m, t.a, t.s, T); }, {"jtp"}));
    }
    return R;
}

}  // namespace

const std::vector<IdentityCase>& registry_identities() {
    static const std::vector<IdentityCase> r = build();
    return r;
}

const IdentityCase& find_identity(const std::string& name) {
    for (const auto& c : registry_identities())
        if (c.name == name) return c;
    throw std::out_of_range("unknown identity: " + name);
}

IdentityResult check_identity(const std::string& name, std::optional<Frac> T) {
    const IdentityCase& c = find_identity(name);
    const Frac order = T ? *T : Frac(c.default_order);
    if (order > Frac(kMaxIdentityOrder)) throw std::invalid_argument("order above the configured maximum");
    if (order <= Frac(0)) throw std::invalid_argument("order must be positive");
    IdentityResult r;
    r.name = c.name;
    r.status = c.status;
    r.order = order;
    auto cmp = compare_to_order(c.left(order), c.right(order), order);
    r.pass = cmp.equal;
    if (!cmp.equal) {
        r.exponent = cmp.exponent;
        r.left_coeff = cmp.left.str();
        r.right_coeff = cmp.right.str();
        r.verdict = "mismatch at q^" + cmp.exponent.str();
    } else if (c.status == IdentityStatus::Conjectural) {
        r.verdict = "consistent to order " + order.str() + " (conjectural)";
    } else {
        r.verdict = "verified to order " + order.str();
    }
    return r;
}

std::vector<IdentityResult> check_identities(const std::vector<std::string>& names, std::optional<Frac> T, int jobs) {
    for (const auto& n : names) find_identity(n);
    std::vector<IdentityResult> out(names.size());
    std::vector<std::string> errors(names.size());
    const int nt = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (std::size_t i = 0; i < names.size(); ++i) {
        try {
            out[i] = check_identity(names[i], T);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!errors[i].empty()) throw std::runtime_error(names[i] + ": " + errors[i]);
    return out;
}

std::vector<DissectionRow> check_eta_dissections(const Frac& T) {
    std::vector<DissectionRow> rows;
    auto record = [&](std::string label, const PuiseuxSeries& a, const PuiseuxSeries& b) {
        auto c = compare_to_order(a, b, T);
        DissectionRow r{std::move(label), c.equal, ""};
        if (!c.equal) r.detail = "mismatch at q^" + c.exponent.str() + ": " + c.left.str() + " vs " + c.right.str();
        rows.push_back(r);
    };
    auto jq = [&](std::initializer_list<std::pair<int, int>> fs, Frac pre = 0) {
        ProductSpec s;
        for (auto [m, e] : fs) s.times(jm(m, e));
        s.prefactor = pre;
        return s.build(T);
    };
    const PuiseuxSeries l1 = jq({{3, 1}, {1, -1}});
    const PuiseuxSeries e1 = jq({{4, 1}, {6, 1}, {16, 1}, {24, 2}, {2, -2}, {8, -1}, {12, -1}, {48, -1}});
    const PuiseuxSeries o1 = jq({{4, 1}, {6, 1}, {8, 2}, {48, 1}, {2, -2}, {4, -1}, {16, -1}, {24, -1}}, 1);
    const PuiseuxSeries l2 = jq({{1, 1}, {3, -1}});
    const PuiseuxSeries e2 = jq({{2, 1}, {12, 1}, {16, 1}, {24, 2}, {6, -2}, {8, -1}, {12, -1}, {48, -1}});
    const PuiseuxSeries o2 = jq({{2, 1}, {12, 1}, {8, 2}, {48, 1}, {4, -1}, {6, -2}, {16, -1}, {24, -1}}, 1);

    record("J3/J1 = even + q odd", l1, e1 + o1);
    record("J3/J1 even part = first summand", residue_part(l1, 2, 0), e1);
    record("J3/J1 odd part = second summand", residue_part(l1, 2, 1), o1);
    record("J1/J3 = even - q odd", l2, e2 - o2);
    record("J1/J3 even part = first summand", residue_part(l2, 2, 0), e2);
    record("J1/J3 odd part = minus second summand", residue_part(l2, 2, 1), -o2);
    return rows;
}

std::vector<const IdentityCase*> list_identities(const std::string& filter) {
    std::vector<const IdentityCase*> out;
    for (const auto& c : registry_identities()) {
        bool keep = filter.empty();
        if (filter == "proved") keep = c.status == IdentityStatus::Proved;
        else if (filter == "conjectural") keep = c.status == IdentityStatus::Conjectural;
        else if (filter == "cyclotomic") keep = c.conductor != 1;
        else if (!filter.empty()) {
            keep = c.name.find(filter) != std::string::npos;
            for (const auto& t : c.tags) keep = keep || t == filter;
        }
        if (keep) out.push_back(&c);
    }
    return out;
}

}  // namespace qmod
