#include "opsplit/algebra/scheme_expr.hpp"

#include <cctype>

#include "opsplit/common/errors.hpp"

namespace opsplit::algebra {

SchemeExpr::SchemeExpr(std::vector<ProductTerm> terms) : terms_(std::move(terms)) {}

int SchemeExpr::max_generator() const
{
    int m = -1;
    for (const auto& term : terms_)
        for (const auto& f : term.factors)
            for (int g : f.generators)
                m = std::max(m, g);
    return m;
}

bool SchemeExpr::has_negative_weights() const
{
    for (const auto& term : terms_)
        if (term.weight < 0)
            return true;
    return false;
}

void SchemeExpr::validate(int generator_count) const
{
    if (terms_.empty())
        throw DomainError("scheme expression has no terms");
    Rational total = 0;
    for (const auto& term : terms_) {
        total += term.weight;
        for (const auto& f : term.factors) {
            if (f.fraction <= 0)
                throw DomainError("step fraction " + to_string(f.fraction) + " is not positive");
            if (f.generators.empty())
                throw DomainError("exponential factor without generators");
            for (int g : f.generators) {
                if (g < 0 || (generator_count > 0 && g >= generator_count))
                    throw DomainError("generator index " + std::to_string(g) + " out of range 0.."
                                      + std::to_string(generator_count - 1));
            }
        }
    }
    if (total != 1)
        throw DomainError("scheme weights sum to " + to_string(total) + ", expected 1");
}

SchemeExpr SchemeExpr::product(std::vector<std::pair<Rational, int>> factors)
{
    ProductTerm term{Rational(1), {}};
    for (auto& [c, g] : factors)
        term.factors.push_back(Factor{c, {g}});
    return SchemeExpr({term});
}

SchemeExpr SchemeExpr::combine(const Rational& a, const SchemeExpr& x, const Rational& b, const SchemeExpr& y)
{
    std::vector<ProductTerm> terms;
    for (auto term : x.terms_) {
        term.weight *= a;
        terms.push_back(std::move(term));
    }
    for (auto term : y.terms_) {
        term.weight *= b;
        terms.push_back(std::move(term));
    }
    return SchemeExpr(std::move(terms));
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    SchemeExpr parse()
    {
        std::vector<ProductTerm> terms;
        skip();
        bool negate = false;
        if (peek() == '-' || peek() == '+') {
            negate = peek() == '-';
            ++pos_;
        }
        while (true) {
            ProductTerm term = parse_term();
            if (negate)
                term.weight = -term.weight;
            terms.push_back(std::move(term));
            skip();
            if (pos_ == s_.size())
                break;
            char c = peek();
            if (c != '+' && c != '-')
                throw ParseError("expected '+' or '-' between terms", pos_);
            negate = c == '-';
            ++pos_;
        }
        return SchemeExpr(std::move(terms));
    }

private:
    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    void expect(char c)
    {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    Rational parse_rational_token()
    {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+'))
            ++pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
            ++pos_;
        if (pos_ == start)
            throw ParseError("expected a rational number", start);
        try {
            return parse_rational(s_.substr(start, pos_ - start));
        } catch (const ParseError& e) {
            throw ParseError("malformed rational", start + e.position());
        }
    }

    int parse_generator()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == start)
            throw ParseError("expected a generator index", start);
        return std::stoi(s_.substr(start, pos_ - start));
    }

    bool at_exp()
    {
        skip();
        return s_.compare(pos_, 3, "exp") == 0;
    }

    Factor parse_factor()
    {
        if (!at_exp())
            throw ParseError("expected 'exp('", pos_);
        pos_ += 3;
        expect('(');
        Factor f;
        f.fraction = parse_rational_token();
        expect(',');
        f.generators.push_back(parse_generator());
        while (peek() == '+') {
            ++pos_;
            f.generators.push_back(parse_generator());
        }
        expect(')');
        return f;
    }

    ProductTerm parse_term()
    {
        ProductTerm term{Rational(1), {}};
        if (!at_exp()) {
            term.weight = parse_rational_token();
            expect('*');
        }
        term.factors.push_back(parse_factor());
        while (at_exp())
            term.factors.push_back(parse_factor());
        return term;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

SchemeExpr parse_scheme_expr(const std::string& text)
{
    return Parser(text).parse();
}

std::string to_string(const SchemeExpr& expr)
{
    std::string out;
    bool first = true;
    for (const auto& term : expr.terms()) {
        Rational w = term.weight;
        if (!first)
            out += w < 0 ? " - " : " + ";
        else if (w < 0)
            out += "-";
        if (w < 0)
            w = -w;
        out += to_string(w) + " *";
        for (const auto& f : term.factors) {
            out += " exp(" + to_string(f.fraction) + ",";
            for (std::size_t i = 0; i < f.generators.size(); ++i)
                out += (i ? "+" : "") + std::to_string(f.generators[i]);
            out += ")";
        }
        first = false;
    }
    return out;
}

} // namespace opsplit::algebra
