#include "opsplit/algebra/series.hpp"

#include <algorithm>
#include <cctype>

#include "opsplit/common/errors.hpp"

namespace opsplit::algebra {

Rational parse_rational(const std::string& text)
{
    std::size_t i = 0;
    auto digits = [&](std::size_t from) {
        std::size_t j = from;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
            ++j;
        if (j == from)
            throw ParseError("expected digits in rational '" + text + "'", from);
        return j;
    };
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    std::size_t end = digits(i);
    BigInt num(text.substr(i, end - i));
    BigInt den = 1;
    if (end < text.size()) {
        if (text[end] != '/')
            throw ParseError("unexpected character in rational '" + text + "'", end);
        std::size_t dend = digits(end + 1);
        if (dend != text.size())
            throw ParseError("trailing characters in rational '" + text + "'", dend);
        den = BigInt(text.substr(end + 1, dend - end - 1));
        if (den == 0)
            throw ParseError("zero denominator in '" + text + "'", end + 1);
    }
    Rational r(num, den);
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r)
{
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

Rational factorial(int k)
{
    BigInt f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return Rational(f);
}

bool WordOrder::operator()(const Word& a, const Word& b) const
{
    if (a.letters.size() != b.letters.size())
        return a.letters.size() < b.letters.size();
    return std::lexicographical_compare(a.letters.rbegin(), a.letters.rend(), b.letters.rbegin(),
                                        b.letters.rend());
}

std::string to_string(const Word& w)
{
    std::string s = "(";
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i)
            s += ' ';
        s += "L" + std::to_string(static_cast<int>(w.letters[i]));
    }
    return s + ")";
}

void check_capacity(int generators, int order, const EngineLimits& limits)
{
    if (order < 0 || generators < 1)
        throw DomainError("truncation order must be >= 0 and generator count >= 1");
    if (generators > 255)
        throw CapacityError("at most 255 generators are supported");
    if (order > limits.max_order)
        throw CapacityError("truncation order " + std::to_string(order) + " exceeds the cap "
                            + std::to_string(limits.max_order));
    std::size_t total = 0;
    std::size_t layer = 1;
    for (int k = 0; k <= order; ++k) {
        total += layer;
        if (total > limits.max_words)
            throw CapacityError("word count for " + std::to_string(generators) + " generators at order "
                                + std::to_string(order) + " exceeds the cap "
                                + std::to_string(limits.max_words));
        layer *= static_cast<std::size_t>(generators);
    }
}

Series::Series(int generators, int order) : generators_(generators), order_(order) {}

Series Series::identity(int generators, int order)
{
    Series s(generators, order);
    s.add(Word{}, Rational(1));
    return s;
}

Rational Series::coefficient(const Word& w) const
{
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Series::add(const Word& w, const Rational& c)
{
    if (static_cast<int>(w.degree()) > order_ || c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Series& Series::operator+=(const Series& other)
{
    for (const auto& [w, c] : other.terms_)
        add(w, c);
    return *this;
}

Series& Series::operator*=(const Rational& s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& entry : terms_)
        entry.second *= s;
    return *this;
}

Series Series::operator*(const Series& other) const
{
    Series out(std::max(generators_, other.generators_), std::min(order_, other.order_));
    for (const auto& [wa, ca] : terms_) {
        for (const auto& [wb, cb] : other.terms_) {
            if (static_cast<int>(wa.degree() + wb.degree()) > out.order_)
                continue;
            Word w;
            w.letters.reserve(wa.degree() + wb.degree());
            w.letters.insert(w.letters.end(), wa.letters.begin(), wa.letters.end());
            w.letters.insert(w.letters.end(), wb.letters.begin(), wb.letters.end());
            out.add(w, ca * cb);
        }
    }
    return out;
}

Series Series::slice(int degree) const
{
    Series out(generators_, order_);
    for (const auto& [w, c] : terms_)
        if (static_cast<int>(w.degree()) == degree)
            out.terms_.emplace(w, c);
    return out;
}

Series Series::reversed() const
{
    Series out(generators_, order_);
    for (const auto& [w, c] : terms_) {
        Word r{std::vector<std::uint8_t>(w.letters.rbegin(), w.letters.rend())};
        out.add(r, c);
    }
    return out;
}

bool Series::operator==(const Series& other) const
{
    return terms_ == other.terms_;
}

} // namespace opsplit::algebra
