// Runs the seven acceptance criteria and prints one PASS/FAIL line for each.
// Usage: acceptance [path-to-properties-binary] [-v]
#include "qmod/identities.hpp"
#include "qmod/numeric.hpp"
#include "qmod/transforms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace qmod;

namespace {

bool verbose = false;

struct Outcome {
    bool pass = true;
    std::string summary;
    void fail(const std::string& why) {
        if (pass) summary = why;
        pass = false;
        if (verbose) std::cerr << "  fail: " << why << "\n";
    }
};

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

std::string fmt(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << x;
    return os.str();
}

void run_identities(Outcome& out, const std::vector<std::string>& names, std::optional<Frac> T, int& count) {
    for (const auto& r : check_identities(names, T, 1)) {
        ++count;
        if (!r.pass) out.fail(r.name + " " + r.verdict);
    }
}

Outcome criterion1() {
    Outcome o;
    int n = 0;
    run_identities(o, {"RR1", "RR2"}, Frac(200), n);
    std::vector<std::string> at100, rest;
    for (const auto& c : registry_identities()) {
        if (starts_with(c.name, "AG-") || starts_with(c.name, "Bressoud-") || starts_with(c.name, "Capparelli") ||
            starts_with(c.name, "KR-"))
            at100.push_back(c.name);
        else if (std::find(c.tags.begin(), c.tags.end(), "example") != c.tags.end() || starts_with(c.name, "B4k-") ||
                 starts_with(c.name, "OvB-"))
            rest.push_back(c.name);
    }
    run_identities(o, at100, Frac(100), n);
    // application sums at their default orders, all at least 30
    for (const auto& name : rest)
        if (find_identity(name).default_order < 30) o.fail(name + " default order below 30");
    run_identities(o, rest, std::nullopt, n);
    o.summary = o.pass ? std::to_string(n) + " sum-product identities, zero mismatches" : o.summary;
    return o;
}

Outcome criterion2() {
    Outcome o;
    int n = 0;
    run_identities(o, {"crank-3dissect-z=zeta9", "crank-3dissect-z=zeta9^2", "crank-3dissect-z=zeta9^4"}, Frac(60), n);
    run_identities(o, {"J-id-1", "J-id-2", "id-1", "id-2"}, Frac(200), n);
    for (const auto& row : check_eta_dissections(Frac(200))) {
        ++n;
        if (!row.pass) o.fail(row.label + " " + row.detail);
    }
    if (o.pass) o.summary = std::to_string(n) + " exact checks over Q and Q(zeta_9)";
    return o;
}

Outcome criterion3() {
    Outcome o;
    auto rows = cyclo_constant_check();
    for (const auto& r : rows)
        if (!r.pass) o.fail(r.name + " " + r.detail);
    if (o.pass) o.summary = std::to_string(rows.size()) + " equalities exact in Q(zeta_18)";
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst = -999;
    int rows = 0;
    for (const auto& c : registry_transform_cases()) {
        auto rep = verify_transform(c, default_sample_points(), 192);
        for (const auto& r : rep.rows) {
            if (r.expect != Expectation::Pass) continue;
            ++rows;
            worst = std::max(worst, r.log10_residual);
            if (!r.ok) o.fail(c.name + " " + r.kind + " at " + r.tau + ": " + fmt(r.log10_residual) + " " + r.diagnosis);
        }
    }
    // Andrews-Gordon k = 2 against the Rogers-Ramanujan sine matrix, entrywise
    auto pick = [](const TransformCase& c) {
        for (const auto& r : c.rules)
            if (r.kind == "S") return r.matrix.numeric(200);
        throw std::logic_error("no S rule in " + c.name);
    };
    const auto diff = num_max_diff(pick(find_transform_case("AG-k2")), pick(find_transform_case("RR")));
    const double d = diff.is_zero() ? -999 : diff.log2_abs() * std::log10(2.0);
    if (d >= -30) o.fail("AG-k2 S-matrix differs from the RR matrix by 10^" + fmt(d));
    if (o.pass)
        o.summary = std::to_string(rows) + " residuals, worst 10^" + fmt(worst) + "; AG k=2 vs RR matrix 10^" + fmt(d);
    return o;
}

Outcome criterion5() {
    Outcome o;
    auto rep = verify_transform(find_transform_case("x48"), default_sample_points(), 192);
    double comp = -999, cand = 999;
    for (const auto& r : rep.rows) {
        if (r.kind == "composite") comp = std::max(comp, r.log10_residual);
        if (r.kind == "candidate") cand = std::min(cand, r.log10_residual);
        if (!r.ok) o.fail(r.kind + " at " + r.tau + ": 10^" + fmt(r.log10_residual));
    }
    if (comp >= kPassLog10) o.fail("level 8 rule residual 10^" + fmt(comp));
    if (cand <= kFailLog10) o.fail("level 4 candidate unexpectedly holds (10^" + fmt(cand) + ")");
    if (o.pass)
        o.summary = "tau/(8tau+1) rule 10^" + fmt(comp) + ", tau/(4tau+1) candidate fails at 10^" + fmt(cand);
    return o;
}

Outcome criterion6() {
    Outcome o;
    double worst = -999;
    auto note = [&](const LemmaReport& r, const std::string& what) {
        worst = std::max(worst, r.worst_log10());
        if (!r.all_converged() || r.worst_log10() >= kPassLog10) o.fail(what + ": 10^" + fmt(r.worst_log10()));
    };
    // generalized eta under 20 random matrices with c != 0
    std::mt19937 rng(1);
    const BigComplex t = parse_tau("1/7+9/10*i", 256);
    int got = 0;
    while (got < 20) {
        const std::int64_t a = static_cast<std::int64_t>(rng() % 7) - 3, b = static_cast<std::int64_t>(rng() % 7) - 3;
        const std::int64_t c = static_cast<std::int64_t>(rng() % 9) - 4;
        if (c == 0) continue;
        std::optional<std::int64_t> d;
        for (std::int64_t x = -6; x <= 6; ++x)
            if (a * x - b * c == 1) d = x;
        if (!d) continue;
        const int Ns[] = {2, 3, 5, 9};
        const int N = Ns[rng() % 4];
        const std::int64_t g = static_cast<std::int64_t>(rng() % N), h = static_cast<std::int64_t>(rng() % N);
        if (g == 0 && h == 0) continue;
        MobiusMap m(a, b, c, *d);
        if (mobius_apply(m, t).im.to_double() < 0.15) continue;
        note(verify_gen_eta(N, g, h, m, t, 192), "gen eta " + m.str());
        ++got;
    }
    const BigComplex tau = parse_tau("1/5+1/2*i", 256);
    // S and T rules of g, h: integer j, m in (1/2)Z up to 5
    for (int m2 = 1; m2 <= 10; ++m2)
        for (int j = -m2; j <= m2; ++j)
            note(verify_theta_lemmas(Frac(j), Frac(m2, 2), tau, 192),
                 "theta j=" + std::to_string(j) + " m=" + Frac(m2, 2).str());
    // g and h at -1/(4 tau), all parity cases
    for (int k = 2; k <= 7; ++k)
        for (int j = 0; j <= k; ++j) {
            note(verify_theta_lemma(ThetaLemma::QuarterG, Frac(j), Frac(k), tau, 192), "quarter g");
            note(verify_theta_lemma(ThetaLemma::QuarterH, Frac(j), Frac(k), tau, 192), "quarter h");
        }
    if (o.pass) o.summary = "20 generalized eta matrices and all theta lemma cases, worst 10^" + fmt(worst);
    return o;
}

Outcome criterion7(const std::string& properties) {
    Outcome o;
    if (properties.empty()) {
        o.fail("no properties binary given");
        return o;
    }
    const std::string cmd = "\"" + properties + "\" --minimal" + (verbose ? "" : " > /dev/null 2>&1");
    const int rc = std::system(cmd.c_str());
    if (rc != 0) o.fail("properties binary exited with status " + std::to_string(rc));
    else o.summary = "ring axioms, splicing, theta, Nahm box doubling, brute force, precision";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string properties;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-v") verbose = true;
        else properties = a;
    }
    const char* titles[] = {"exact identity suite",     "cyclotomic dissections",   "cyclotomic constants",
                            "numeric transformations",  "negative control",         "lemma suites",
                            "property suites"};
    bool all = true;
    for (int c = 1; c <= 7; ++c) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            switch (c) {
                case 1: o = criterion1(); break;
                case 2: o = criterion2(); break;
                case 3: o = criterion3(); break;
                case 4: o = criterion4(); break;
                case 5: o = criterion5(); break;
                case 6: o = criterion6(); break;
                default: o = criterion7(properties); break;
            }
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && o.pass;
        std::cout << "criterion " << c << " " << (o.pass ? "PASS" : "FAIL") << "  " << titles[c - 1] << ": "
                  << o.summary << " (" << fmt(s) << " s)\n"
                  << std::flush;
    }
    return all ? 0 : 1;
}
