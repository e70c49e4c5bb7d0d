// Registry of exact sum = product and product = product identities.
#pragma once

#include "qmod/series.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qmod {

enum class IdentityStatus { Proved, Conjectural };

using SeriesRecipe = std::function<PuiseuxSeries(const Frac& T)>;

struct IdentityCase {
    std::string name;
    std::string anchor;
    IdentityStatus status = IdentityStatus::Proved;
    int conductor = 1;  // coefficient ring Q(zeta_conductor)
    int rank = 0;       // summation rank of the left side, 0 for product identities
    int default_order = 200;
    std::vector<std::string> tags;
    SeriesRecipe left, right;
};

inline constexpr int kMaxIdentityOrder = 2000;

struct IdentityResult {
    std::string name;
    IdentityStatus status = IdentityStatus::Proved;
    Frac order;
    bool pass = false;
    // first mismatch
    std::optional<Frac> exponent;
    std::string left_coeff, right_coeff;
    std::string verdict;  // "verified to order T", "consistent to order T (conjectural)", "mismatch at q^e"
};

const std::vector<IdentityCase>& registry_identities();
const IdentityCase& find_identity(const std::string& name);  // throws std::out_of_range

// Exact comparison below T (default order when T is absent). Throws
// std::out_of_range for unknown names and std::invalid_argument for T above
// kMaxIdentityOrder.
IdentityResult check_identity(const std::string& name, std::optional<Frac> T = std::nullopt);

// Runs the named cases with up to `jobs` threads; results keep the input order.
std::vector<IdentityResult> check_identities(const std::vector<std::string>& names, std::optional<Frac> T,
                                             int jobs = 1);

struct DissectionRow {
    std::string label;
    bool pass = false;
    std::string detail;
};

// The two 2-dissections J3/J1 and J1/J3: the full identity, and separately
// that each displayed summand is exactly the even (odd) part extracted from
// the left side.
std::vector<DissectionRow> check_eta_dissections(const Frac& T);

// filter: "" (all), "proved", "conjectural", "cyclotomic", or a substring of
// a name or tag.
std::vector<const IdentityCase*> list_identities(const std::string& filter = "");

std::string status_str(IdentityStatus s);

}  // namespace qmod
