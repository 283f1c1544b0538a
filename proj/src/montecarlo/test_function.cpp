#include "opsplit/montecarlo/test_function.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "opsplit/common/errors.hpp"

namespace opsplit::montecarlo {

int TestFunction::monomial_power() const
{
    if (!polynomial)
        return -1;
    int power = -1;
    for (std::size_t k = 0; k < polynomial->size(); ++k)
        if ((*polynomial)[k] != 0.0) {
            if (power >= 0)
                return -1;
            power = static_cast<int>(k);
        }
    return power;
}

TestFunction constant_one()
{
    return polynomial({1.0}, "one");
}

TestFunction monomial(int p)
{
    if (p < 0)
        throw ConfigError("test function: monomial power must be nonnegative");
    std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
    c.back() = 1.0;
    return polynomial(std::move(c), p == 0 ? "one" : p == 1 ? "x" : "x^" + std::to_string(p));
}

TestFunction polynomial(std::vector<double> coefficients, std::string name)
{
    while (coefficients.size() > 1 && coefficients.back() == 0.0)
        coefficients.pop_back();
    if (coefficients.empty())
        coefficients.push_back(0.0);
    TestFunction f;
    if (name.empty()) {
        std::ostringstream s;
        s << "poly(";
        for (std::size_t k = 0; k < coefficients.size(); ++k)
            s << (k ? "," : "") << coefficients[k];
        s << ")";
        name = s.str();
    }
    f.name = std::move(name);
    f.degree = static_cast<int>(coefficients.size()) - 1;
    double total = 0.0;
    for (double c : coefficients)
        total += std::abs(c);
    f.growth_constant = std::max(total, 1e-300);
    f.eval = [coefficients](const State& x) {
        double v = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            v = v * x[0] + *it;
        return v;
    };
    f.polynomial = std::move(coefficients);
    return f;
}

TestFunction cosine()
{
    TestFunction f;
    f.name = "cos";
    f.degree = 0;
    f.growth_constant = 1.0;
    f.eval = [](const State& x) { return std::cos(x[0]); };
    return f;
}

TestFunction parse_test_function(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text += c;
    if (text == "one" || text == "1")
        return constant_one();
    if (text == "x")
        return monomial(1);
    if (text == "cos")
        return cosine();
    if (text.rfind("x^", 0) == 0) {
        try {
            std::size_t used = 0;
            const int p = std::stoi(text.substr(2), &used);
            if (used == text.size() - 2 && p >= 0)
                return monomial(p);
        } catch (const std::exception&) {
        }
    }
    if (text.rfind("poly(", 0) == 0 && text.back() == ')') {
        std::vector<double> c;
        std::stringstream in(text.substr(5, text.size() - 6));
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                std::size_t used = 0;
                c.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw ConfigError("");
            } catch (const std::exception&) {
                throw ConfigError("test function '" + raw + "': cannot read coefficient '" + item + "'");
            }
        }
        if (c.empty())
            throw ConfigError("test function '" + raw + "': no coefficients");
        return polynomial(std::move(c));
    }
    throw ConfigError("test function '" + raw + "': expected one, x, x^k, poly(c0, c1, ...) or cos");
}

bool growth_bound_holds(const TestFunction& f, int dim, double radius, int points)
{
    for (int i = 0; i < points; ++i) {
        State x = State::Zero(dim);
        x[0] = -radius + 2.0 * radius * i / (points - 1);
        const double bound = f.growth_constant * (1.0 + std::pow(x.norm(), f.degree));
        if (std::abs(f(x)) > bound * (1 + 1e-12))
            return false;
    }
    return true;
}

} // namespace opsplit::montecarlo
