#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opsplit/algebra/rational.hpp"

namespace opsplit::algebra {

/// Monomial L_{i_1} L_{i_2} ... L_{i_k} in the free algebra over the generators.
/// Letters are stored in operator-product order (leftmost first); the implicit
/// power of the step size equals the length.
struct Word {
    std::vector<std::uint8_t> letters;

    std::size_t degree() const { return letters.size(); }
    bool operator==(const Word&) const = default;
};

/// Orders words by degree, then colexicographically (last letter most significant).
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const;
};

/// "(L1 L0 L2)"; the empty word prints as "()".
std::string to_string(const Word& w);

/// Word-count and truncation caps. Expansion refuses to start when the
/// worst-case number of words of degree <= order exceeds max_words.
struct EngineLimits {
    int max_order = 6;
    std::size_t max_words = 1'000'000;
};

/// Truncated noncommutative polynomial sum_w c_w w with exact coefficients.
/// Words longer than the truncation order are dropped on insertion and zero
/// coefficients are never stored.
class Series {
public:
    using Map = std::map<Word, Rational, WordOrder>;

    Series(int generators, int order);

    static Series identity(int generators, int order);

    int generators() const { return generators_; }
    int order() const { return order_; }
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Zero for absent words.
    Rational coefficient(const Word& w) const;
    void add(const Word& w, const Rational& c);

    Series& operator+=(const Series& other);
    Series& operator*=(const Rational& s);
    /// Truncated product in the free algebra.
    Series operator*(const Series& other) const;

    /// Degree-k homogeneous part (the e_k of the step-size expansion).
    Series slice(int degree) const;

    /// Same series with every word reversed.
    Series reversed() const;

    bool operator==(const Series& other) const;

private:
    int generators_;
    int order_;
    Map terms_;
};

/// Checks sum_{k<=order} generators^k <= max_words and order <= max_order.
void check_capacity(int generators, int order, const EngineLimits& limits);

} // namespace opsplit::algebra
