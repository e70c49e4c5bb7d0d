// Nahm sums, generalized Nahm sums and the named sum families.
#pragma once

#include "qmod/kernels.hpp"
#include "qmod/series.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qmod {

using FracMatrix = std::vector<std::vector<Frac>>;

// coef * q^{linear . n + constant}; linear and constant must be nonnegative.
struct NumeratorMonomial {
    Rational coef = 1;
    std::vector<Frac> linear;  // empty means zero
    Frac constant = 0;
};

struct NahmQuadruple {
    FracMatrix A;
    std::vector<Frac> B;
    Frac C = 0;
    std::vector<std::int64_t> D;  // empty means identity

    int rank() const { return static_cast<int>(B.size()); }
    FracMatrix AD() const;
    // Throws std::invalid_argument on shape errors and NotPositiveDefinite.
    void validate() const;
    // Builds A = G D^{-1} from the symmetric form G = AD.
    static NahmQuadruple from_form(const FracMatrix& G, std::vector<Frac> B, Frac C, std::vector<std::int64_t> D = {});
};

class NotPositiveDefinite : public std::invalid_argument {
public:
    NotPositiveDefinite(int index, Rational pivot);
    int index;       // 0-based pivot position
    Rational pivot;  // the non-positive pivot
};

class QuadrupleParseError : public std::runtime_error {
public:
    QuadrupleParseError(const std::string& msg, int line, int column);
    int line, column;
};

// Exact LDL^T; returns the pivots. ok = all pivots positive.
struct LdltResult {
    bool ok = true;
    std::vector<Rational> pivots;
    int failed_at = -1;
};
LdltResult ldlt_pivots(const std::vector<std::vector<Rational>>& G);

// Rational lambda > 0 with G - lambda*I positive definite (bisection on the
// LDL^T test). Throws if G is not positive definite.
Rational least_eigenvalue_lower_bound(const std::vector<std::vector<Rational>>& G, int iterations = 40);

// Sum over n >= 0 of scalar * q^{n^T G n / 2 + B.n + C} * numerator(n)
// / prod (q^{d_i}; q^{d_i})_{n_i}. G must be strictly copositive, certified by
// G minus its positive off-diagonal entries being positive definite.
struct QuadraticSum {
    FracMatrix G;
    std::vector<Frac> B;
    Frac C = 0;
    std::vector<std::int64_t> D;
    std::vector<NumeratorMonomial> numerator;  // empty means 1
    Rational scalar = 1;
};

struct NahmOptions {
    kernels::Exec exec = kernels::Exec::Auto;
    bool prune = true;   // off: enumerate the whole box
    int box_scale = 1;   // multiplies the per-coordinate box bound
};

struct NahmStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    std::int64_t box = 0;  // per-coordinate bound used
    Rational lambda;       // eigenvalue lower bound of the bounding form
};

PuiseuxSeries expand_quadratic_sum(const QuadraticSum& s, const Frac& T, const NahmOptions& opt = {},
                                   NahmStats* stats = nullptr);

PuiseuxSeries nahm_sum(const NahmQuadruple& quad, const Frac& T, const NahmOptions& opt = {}, NahmStats* stats = nullptr);

// Exact exponent n^T AD n / 2 + B.n + C.
Frac nahm_exponent(const NahmQuadruple& quad, const std::vector<std::int64_t>& n);

// {"A": [["p/q", ...], ...], "B": [...], "C": "p/q", "D": [ints]}
NahmQuadruple parse_quadruple_json(const std::string& text);

// Named families.
QuadraticSum andrews_gordon_form(int k, int i);
QuadraticSum bressoud_form(int k, int i);
QuadraticSum capparelli_form(int which);
QuadraticSum kanade_russell_form(int which);

PuiseuxSeries andrews_gordon_sum(int k, int i, const Frac& T, const NahmOptions& opt = {});
PuiseuxSeries bressoud_sum(int k, int i, const Frac& T, const NahmOptions& opt = {});
PuiseuxSeries capparelli_sum(int which, const Frac& T, const NahmOptions& opt = {});
PuiseuxSeries kanade_russell_sum(int which, const Frac& T, const NahmOptions& opt = {});
// Nested sums with Laurent Pochhammer prefactors.
PuiseuxSeries bressoud_4k_sum(int k, int i, const Frac& T);
PuiseuxSeries overpartition_bressoud_sum(int k, int i, const Frac& T);

// Sums of the application examples. Ids: "ex1" and "ex2" take (k, i); the
// others ("111-mod5-x1", ..., "48-x2") ignore them.
QuadraticSum example_form(const std::string& id, int k = 0, int i = 0);
PuiseuxSeries example_sum(const std::string& id, const Frac& T, int k = 0, int i = 0, const NahmOptions& opt = {});
std::vector<std::string> example_ids();

enum class SumFamily { AndrewsGordon, Bressoud, Capparelli, KanadeRussell, Bressoud4k, OverpartitionBressoud, Example, Raw };

struct SumFamilySpec {
    SumFamily family = SumFamily::Raw;
    int k = 0, i = 0, which = 0;
    std::string example;
    NahmQuadruple raw;
};

// Parses "AG k=2 i=2", "Bressoud k=3 i=1", "Capparelli 2", "KR b1",
// "B4k k=2 i=1", "OvB k=2 i=2", "example 222-x1", "example ex1 k=2 i=1".
SumFamilySpec parse_family(const std::string& text);
PuiseuxSeries expand_family(const SumFamilySpec& spec, const Frac& T, const NahmOptions& opt = {});

}  // namespace qmod
