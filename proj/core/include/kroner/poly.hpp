#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace kroner {

/// Arbitrary-precision rational. gmpxx keeps results of arithmetic in
/// canonical form (reduced, positive denominator).
using Rat = mpq_class;

/// Builds a canonical rational from numerator/denominator decimal strings.
Rat make_rat(const std::string& num, const std::string& den = "1");

/// n! as an exact rational.
Rat factorial(unsigned n);

/// Exact value of the Beta integral  ∫₀¹ t^a (1-t)^b dt = a! b! / (a+b+1)!.
Rat beta_integral(unsigned a, unsigned b);

/// Exponent multi-index. Unused trailing slots (dim 2) stay zero.
using Exponent = std::array<std::uint8_t, 3>;

int total_degree(const Exponent& e);

/// Graded lexicographic order: lower total degree first, then lexicographic
/// with higher powers of x1 first.
struct GradedLexLess {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Exact multivariate polynomial over Rat in 2 or 3 variables.
///
/// Terms are kept sorted in graded-lex order with no zero coefficients, so
/// two polynomials are equal iff their term lists are identical.
class Poly {
public:
    struct Term {
        Exponent exp{};
        Rat coeff;
        bool operator==(const Term&) const = default;
    };

    Poly() = default;
    explicit Poly(int dim);

    static Poly zero(int dim) { return Poly(dim); }
    static Poly constant(int dim, const Rat& c);
    /// The coordinate function x_{i+1} (0-based i).
    static Poly variable(int dim, int i);
    static Poly monomial(int dim, const Exponent& e, const Rat& c = Rat(1));

    /// All monomials of exactly degree r, in graded-lex order.
    static std::vector<Exponent> monomials_of_degree(int dim, int r);
    /// All monomials of degree 0..max_degree, in graded-lex order.
    static std::vector<Exponent> monomials_up_to(int dim, int max_degree);

    int dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Highest total degree, -1 for the zero polynomial.
    int degree() const;
    /// Lowest total degree, -1 for the zero polynomial.
    int min_degree() const;
    /// True for zero and for polynomials whose terms all have degree r.
    bool is_homogeneous(int r) const;
    bool is_homogeneous() const;
    Rat coefficient(const Exponent& e) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rat& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;

    bool operator==(const Poly& o) const;

    /// Partial derivative ∂_{i+1}.
    Poly derivative(int i) const;
    Rat evaluate(std::span<const Rat> x) const;
    double evaluate(std::span<const double> x) const;

    /// p(t·x) = Σ_r t^r p_r(x); entry r of the result is p_r (possibly zero).
    std::vector<Poly> scale_substitution() const;
    /// p(x + c).
    Poly translate(std::span<const Rat> c) const;

    std::string to_string() const;

private:
    void check_dim(const Poly& o) const;
    void normalize();

    int dim_ = 3;
    std::vector<Term> terms_;
};

/// Grading of a polynomial by total degree: parts[r] is homogeneous of degree r.
struct HomoDecomp {
    std::map<int, Poly> parts;
    Poly sum(int dim) const;
};

HomoDecomp homogeneous_parts(const Poly& p);

/// ∫₀¹ t^a (1-t)^b p(t·x) dt, computed exactly: the degree-r part of p is
/// multiplied by (a+r)! b! / (a+r+b+1)!.
Poly radial_beta_transform(const Poly& p, unsigned a, unsigned b);

}  // namespace kroner
