#include "doctest.h"
#include "oracles.hpp"

#include "qmod/identities.hpp"
#include "qmod/products.hpp"

#include <set>

using namespace qmod;

TEST_CASE("registry shape") {
    const auto& all = registry_identities();
    CHECK(all.size() >= 40);
    std::set<std::string> names;
    for (const auto& c : all) {
        CHECK(names.insert(c.name).second);
        CHECK(c.default_order > 0);
        CHECK(c.default_order <= kMaxIdentityOrder);
        CHECK_FALSE(c.anchor.empty());
    }
    for (const auto* c : list_identities("cyclotomic")) CHECK(c->name.rfind("crank", 0) == 0);
    CHECK(list_identities("cyclotomic").size() == 3);
    for (const auto* c : list_identities("conjectural")) CHECK(c->name.rfind("KR-", 0) == 0);
    CHECK(list_identities("andrews-gordon").size() == 14);
}

TEST_CASE("every identity holds to a small order") {
    std::vector<std::string> names;
    for (const auto& c : registry_identities()) names.push_back(c.name);
    auto res = check_identities(names, Frac(25), 2);
    REQUIRE(res.size() == names.size());
    for (std::size_t i = 0; i < res.size(); ++i) {
        CHECK(res[i].name == names[i]);
        INFO(res[i].name << ": " << res[i].verdict);
        CHECK(res[i].pass);
    }
}

TEST_CASE("Rogers-Ramanujan sums against a partition count") {
    // parts congruent to +-1 mod 5
    auto ref = oracle::restricted_partitions(200, [](int n) { return n % 5 == 1 || n % 5 == 4; });
    const auto& c = find_identity("RR1");
    auto s = c.left(Frac(200));
    for (int n = 0; n < 200; ++n) CHECK(s.coeff(Frac(n)).rational_value() == ref[static_cast<std::size_t>(n)]);
}

TEST_CASE("verdicts and errors") {
    auto r = check_identity("KR-1", Frac(30));
    CHECK(r.pass);
    CHECK(r.status == IdentityStatus::Conjectural);
    CHECK(r.verdict.find("conjectural") != std::string::npos);
    auto p = check_identity("RR1", Frac(30));
    CHECK(p.verdict == "verified to order 30");
    CHECK_THROWS_AS(check_identity("no-such"), std::out_of_range);
    CHECK_THROWS_AS(check_identity("RR1", Frac(kMaxIdentityOrder + 1)), std::invalid_argument);
    CHECK_THROWS_AS(check_identities({"RR1", "no-such"}, Frac(10), 1), std::out_of_range);
}

TEST_CASE("a perturbed identity reports its first mismatch") {
    const auto& c = find_identity("RR1");
    auto wrong = pochs({1, 4}, 5, 1, -1).build(40) + PuiseuxSeries::term(Frac(17), Rational(1));
    auto cmp = compare_to_order(c.left(Frac(40)), wrong, Frac(40));
    CHECK_FALSE(cmp.equal);
    CHECK(cmp.exponent == Frac(17));
}

TEST_CASE("eta-quotient dissections by parity") {
    for (const auto& row : check_eta_dissections(Frac(150))) {
        INFO(row.label << " " << row.detail);
        CHECK(row.pass);
    }
}
