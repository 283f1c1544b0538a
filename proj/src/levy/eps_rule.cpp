#include "opsplit/levy/eps_rule.hpp"

#include <cmath>
#include <sstream>

#include "opsplit/algebra/rational.hpp"
#include "opsplit/common/errors.hpp"

namespace opsplit::levy {

namespace {

constexpr double kEpsFloor = 1e-12;

double parse_number(const std::string& text, const std::string& rule)
{
    try {
        if (text.find('/') != std::string::npos)
            return static_cast<double>(algebra::parse_rational(text));
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("eps rule '" + rule + "': cannot read number '" + text + "'");
    }
}

} // namespace

double eps_for_order(const LevyMeasure& nu, double t, int M, EpsMode mode)
{
    if (!(t > 0.0 && t <= 1.0))
        throw DomainError("eps_for_order: t must lie in (0, 1]");
    if (M < 1)
        throw DomainError("eps_for_order: M must be at least 1");
    const double k = mode == EpsMode::ignore ? 2.0 : 3.0;
    const double bound = std::pow(t, M + 1);
    auto moment = [&](double eps) { return nu.integral(k, 0.0, eps); };
    if (moment(1.0) <= bound)
        return 1.0;
    if (moment(kEpsFloor) > bound) {
        std::ostringstream msg;
        msg << "eps_for_order: no eps in [1e-12, 1] satisfies int_{|y|<=eps} |y|^" << k << " nu <= t^" << (M + 1)
            << " = " << bound << " for " << nu.describe();
        throw InfeasibleError(msg.str());
    }
    double lo = std::log(kEpsFloor), hi = 0.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (moment(std::exp(mid)) <= bound)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(lo);
}

double eps_power_rule(double t, double alpha)
{
    if (!(t > 0.0))
        throw DomainError("eps_power_rule: t must be positive");
    if (!(alpha < 3.0))
        throw DomainError("eps_power_rule: alpha must be below 3");
    return std::pow(t, 1.0 / (3.0 - alpha));
}

double EpsRule::resolve(const LevyMeasure& nu, double t, EpsMode mode) const
{
    switch (kind) {
    case Kind::bisect: return eps_for_order(nu, t, static_cast<int>(value), mode);
    case Kind::power: return std::min(1.0, eps_power_rule(t, std::max(0.0, nu.activity_index())));
    case Kind::exponent: return std::min(1.0, std::pow(t, value));
    case Kind::fixed: return value;
    }
    return value;
}

EpsRule EpsRule::parse(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text += c;
    const auto open = text.find('(');
    const std::string head = text.substr(0, open);
    std::string arg;
    if (open != std::string::npos) {
        if (text.back() != ')')
            throw ConfigError("eps rule '" + raw + "': missing ')'");
        arg = text.substr(open + 1, text.size() - open - 2);
    }
    EpsRule rule;
    if (head == "power") {
        if (arg.empty()) {
            rule.kind = Kind::power;
        } else {
            rule.kind = Kind::exponent;
            rule.value = parse_number(arg, raw);
            if (!(rule.value > 0.0))
                throw ConfigError("eps rule '" + raw + "': exponent must be positive");
        }
    } else if (head == "bisect") {
        rule.kind = Kind::bisect;
        rule.value = arg.empty() ? 2.0 : parse_number(arg, raw);
        if (rule.value < 1.0 || rule.value != std::floor(rule.value))
            throw ConfigError("eps rule '" + raw + "': M must be a positive integer");
    } else if (head == "fixed") {
        rule.kind = Kind::fixed;
        rule.value = parse_number(arg, raw);
        if (!(rule.value > 0.0 && rule.value <= 1.0))
            throw ConfigError("eps rule '" + raw + "': eps must lie in (0, 1]");
    } else {
        throw ConfigError("eps rule '" + raw + "': expected bisect(M), power, power(x) or fixed(eps)");
    }
    return rule;
}

std::string EpsRule::to_string() const
{
    std::ostringstream s;
    switch (kind) {
    case Kind::bisect: s << "bisect(" << static_cast<int>(value) << ")"; break;
    case Kind::power: s << "power"; break;
    case Kind::exponent: s << "power(" << value << ")"; break;
    case Kind::fixed: s << "fixed(" << value << ")"; break;
    }
    return s.str();
}

} // namespace opsplit::levy
