#pragma once

#include <string>
#include <vector>

#include "opsplit/algebra/rational.hpp"

namespace opsplit::algebra {

/// exp(fraction * t * (L_a + L_b + ...)). Usually a single generator; a
/// generator sum lets the full generator L be written as one exponential.
struct Factor {
    Rational fraction;
    std::vector<int> generators;

    bool operator==(const Factor&) const = default;
};

/// One weighted product xi * prod_k exp(c_k t L_{i_k}); factors are listed in
/// operator-product order (leftmost first).
struct ProductTerm {
    Rational weight;
    std::vector<Factor> factors;

    bool operator==(const ProductTerm&) const = default;
};

/// Weighted sum of exponential products. Weights may be negative
/// (extrapolation) but must sum to one; step fractions must be positive.
class SchemeExpr {
public:
    SchemeExpr() = default;
    explicit SchemeExpr(std::vector<ProductTerm> terms);

    const std::vector<ProductTerm>& terms() const { return terms_; }

    /// Largest generator index referenced (-1 when empty).
    int max_generator() const;
    bool has_negative_weights() const;

    /// Throws DomainError unless weights sum to 1, fractions are positive
    /// and (when generator_count > 0) every index is below generator_count.
    void validate(int generator_count = 0) const;

    /// Product of single-generator exponentials, weight 1.
    static SchemeExpr product(std::vector<std::pair<Rational, int>> factors);

    /// Sum of two expressions with their weights scaled by a and b.
    static SchemeExpr combine(const Rational& a, const SchemeExpr& x, const Rational& b, const SchemeExpr& y);

    bool operator==(const SchemeExpr&) const = default;

private:
    std::vector<ProductTerm> terms_;
};

/// Parses the compact grammar
///   expr    := term (('+' | '-') term)*
///   term    := [rational '*'] factor+
///   factor  := 'exp' '(' rational ',' gen ('+' gen)* ')'
/// e.g. "1/2 * exp(1/2,0) exp(1,1) exp(1/2,0) + 1/2 * exp(1,1) exp(1,0)".
/// Throws ParseError with the character offset of the first problem.
SchemeExpr parse_scheme_expr(const std::string& text);

/// Inverse of parse_scheme_expr (canonical spacing).
std::string to_string(const SchemeExpr& expr);

} // namespace opsplit::algebra
