// Transformation data of vector-valued q-series: algebraic matrices built
// from cos/sin/exp of rational multiples of pi, the case registry, and the
// numeric verifier.
#pragma once

#include "qmod/numeric.hpp"
#include "qmod/products.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qmod {

// f(x pi)^power with f one of cos, sin, exp(i .).
struct Atom {
    enum class Kind { Cos, Sin, Exp };
    Kind kind = Kind::Exp;
    Frac angle;  // multiple of pi
    int power = 1;
};

// coef * sqrt(radicand) * prod(atoms), radicand a positive squarefree integer.
struct AlgTerm {
    Rational coef = 1;
    std::int64_t radicand = 1;
    std::vector<Atom> atoms;
};

class AlgebraicNumber {
public:
    AlgebraicNumber() = default;  // zero
    AlgebraicNumber(long v) : AlgebraicNumber(rational(v)) {}  // NOLINT(google-explicit-constructor)

    static AlgebraicNumber rational(const Rational& c);
    static AlgebraicNumber sqrt(const Rational& r);  // r > 0
    static AlgebraicNumber cos_pi(const Frac& x);
    static AlgebraicNumber sin_pi(const Frac& x);
    static AlgebraicNumber exp_pi_i(const Frac& x);
    static AlgebraicNumber zeta(std::int64_t n, std::int64_t k = 1) { return exp_pi_i(Frac(2 * k, n)); }
    static AlgebraicNumber i() { return exp_pi_i(Frac(1, 2)); }

    const std::vector<AlgTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    BigComplex numeric(mpfr_prec_t prec) const;
    // Canonical image in a cyclotomic field, via cos(x pi) = (z + 1/z)/2 with
    // z = e^{i x pi} and Gauss sums for square roots. nullopt if an atom
    // vanishes under a negative power or the conductor is too large.
    std::optional<CycloElement> to_cyclo() const;
    // Multiplicative inverse; only single-term values with exp atoms or
    // nonvanishing cos/sin atoms are supported.
    AlgebraicNumber inverse() const;
    std::string str() const;

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a);
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return a + (-b); }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
    AlgebraicNumber& operator+=(const AlgebraicNumber& o) { return *this = *this + o; }

private:
    std::vector<AlgTerm> terms_;
};

// Symbolic equality through the cyclotomic image.
bool algebraically_equal(const AlgebraicNumber& a, const AlgebraicNumber& b);

using NumMatrix = std::vector<std::vector<BigComplex>>;

class AlgebraicMatrix {
public:
    AlgebraicMatrix() = default;
    AlgebraicMatrix(int rows, int cols);
    AlgebraicMatrix(std::vector<std::vector<AlgebraicNumber>> entries);  // NOLINT(google-explicit-constructor)
    static AlgebraicMatrix identity(int n);
    static AlgebraicMatrix diagonal(const std::vector<AlgebraicNumber>& d);
    // [[a, b], [c, d]] in blocks.
    static AlgebraicMatrix blocks(const AlgebraicMatrix& a, const AlgebraicMatrix& b, const AlgebraicMatrix& c,
                                  const AlgebraicMatrix& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const AlgebraicNumber& at(int i, int j) const { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    AlgebraicNumber& at(int i, int j) { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    bool is_diagonal() const;

    NumMatrix numeric(mpfr_prec_t prec) const;
    std::string str() const;

    friend AlgebraicMatrix operator*(const AlgebraicMatrix& a, const AlgebraicMatrix& b);
    friend AlgebraicMatrix operator*(const AlgebraicNumber& c, const AlgebraicMatrix& m);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<AlgebraicNumber> e_;
};

NumMatrix num_mul(const NumMatrix& a, const NumMatrix& b);
std::vector<BigComplex> num_apply(const NumMatrix& a, const std::vector<BigComplex>& v);
// max |a_ij - b_ij|
BigFloat num_max_diff(const NumMatrix& a, const NumMatrix& b);

// a_ij = cos((2i-1)(2j-1) pi/(2k)), size floor(k/2).
AlgebraicMatrix matrix_A(int k);
// diag(e^{pi i t^2/(2k)}) over odd t < k.
AlgebraicMatrix matrix_Lambda(int k);
// diag(e^{-pi i t^2/(2k)}) over odd t <= k.
AlgebraicMatrix matrix_Lambda_tilde(int k);
// diag(e^{-pi i (2l-1)^2/(4k)}), l = 1..(k-1)/2 + 1, for odd k.
AlgebraicMatrix matrix_Lambda_hat(int k);
// size floor((k+1)/2); b_ij = cos((i-1)(2j-1) pi/k), last column (1/2)cos((i-1) pi) for odd k.
AlgebraicMatrix matrix_B(int k);
// c_i1 = 1/2, c_ij = cos((2i-1)(j-1) pi/k).
AlgebraicMatrix matrix_C(int k);
// 1/(2 sqrt(3) sin(k pi/9)), k in {1, 2, 4}.
AlgebraicNumber alpha(int k);
// [[a1, a2, a4], [a2, -a4, -a1], [a4, -a1, a2]].
AlgebraicMatrix kr_s_matrix();

// P T^{-1} P for diagonal T. Throws on a non-diagonal or singular T.
AlgebraicMatrix compose_gamma0(const AlgebraicMatrix& P, const AlgebraicMatrix& T);

struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};
// The nine values a_rs = +-alpha_t, checked exactly in Q(zeta_18), plus
// zeta_18^9 = -1 and the reduced form zeta_18^11 (1 - zeta_9^8) = 1 - zeta_9.
std::vector<IdentityCheck> cyclo_constant_check();

// Case registry ----------------------------------------------------------

struct Component {
    enum class Kind { Product, ThetaG };
    std::string label;
    Kind kind = Kind::Product;
    ProductSpec product;  // includes the q-power prefactor
    ThetaIndex theta;

    Evaluation eval(const BigComplex& tau, const EvalOptions& opt) const;
};

// tau -> (a tau + b)/(c tau + d), ad - bc > 0.
struct LinearFractional {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    BigComplex apply(const BigComplex& tau) const;
    std::string str() const;
};

// sqrt((u + v i) tau + w) on the principal branch; absent means 1.
struct SqrtFactor {
    bool present = false;
    Rational u = 0, v = 0, w = 0;
    BigComplex eval(const BigComplex& tau) const;
    std::string str() const;
};

enum class Expectation { Pass, Fail };

struct TransformRule {
    std::string kind;  // "T", "S", "composite", "candidate"
    LinearFractional left;
    Frac arg_scale = 1;  // right side is evaluated at arg_scale * tau
    SqrtFactor factor;
    AlgebraicMatrix matrix;
    Expectation expect = Expectation::Pass;
    std::string note;
};

struct TransformCase {
    std::string name;
    std::string anchor;
    int level = 1;
    std::vector<Component> components;
    AlgebraicMatrix T;
    std::vector<TransformRule> rules;
    std::string note;
};

const std::vector<TransformCase>& registry_transform_cases();
const TransformCase& find_transform_case(const std::string& name);  // throws std::out_of_range

std::vector<std::string> default_sample_points();

struct RuleResidual {
    std::string kind;
    std::string tau;
    Expectation expect = Expectation::Pass;
    double log10_residual = 0;
    bool converged = true;
    bool sign_flip = false;  // residual vanishes after negating the right side
    bool ok = false;         // pass when expected to pass, fail when expected to fail
    std::string diagnosis;   // "", "branch-sign mismatch", "not converged: ..."
};

struct TransformReport {
    std::string name;
    std::vector<RuleResidual> rows;
    bool ok() const;
};

// Residual threshold below which a rule counts as holding, and above which an
// expected failure counts as failing.
inline constexpr double kPassLog10 = -25;
inline constexpr double kFailLog10 = -3;

TransformReport verify_transform(const TransformCase& c, const std::vector<std::string>& taus, mpfr_prec_t prec);

// Points given numerically, e.g. irrational ones such as i/sqrt(3).
struct SamplePoint {
    std::string label;
    BigComplex tau;
};
TransformReport verify_transform(const TransformCase& c, const std::vector<SamplePoint>& taus, mpfr_prec_t prec);

}  // namespace qmod
