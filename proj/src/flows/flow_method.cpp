#include "opsplit/flows/flow_method.hpp"

#include <cctype>

#include "opsplit/common/errors.hpp"

namespace opsplit::flows {

FlowMethod FlowMethod::exact()
{
    return {};
}

FlowMethod FlowMethod::taylor(int m)
{
    if (m < 1)
        throw ConfigError("flow: Taylor order must be at least 1");
    FlowMethod f;
    f.kind = Kind::taylor;
    f.order = m;
    return f;
}

FlowMethod FlowMethod::rk(int m)
{
    FlowMethod f;
    f.kind = Kind::rk;
    f.order = m;
    f.tableau = tableau_for_order(m);
    f.tableau.validate();
    return f;
}

State FlowMethod::apply(const VectorFieldSpec& v, double t, const State& x) const
{
    switch (kind) {
    case Kind::exact: return exp_map(v, t, x);
    case Kind::taylor: return taylor_flow(v, order, t, x, allow_fallback);
    case Kind::rk: return rk_flow(tableau, v, t, x);
    }
    return x;
}

int FlowMethod::local_order() const
{
    return kind == Kind::exact ? 1000 : order;
}

FlowMethod FlowMethod::parse(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text += c;
    if (text == "exact")
        return exact();
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw ConfigError("flow '" + raw + "': expected exact, taylor(m) or rk(m)");
    const std::string head = text.substr(0, open), arg = text.substr(open + 1, text.size() - open - 2);
    int m = 0;
    try {
        std::size_t used = 0;
        m = std::stoi(arg, &used);
        if (used != arg.size())
            throw ConfigError("");
    } catch (const std::exception&) {
        throw ConfigError("flow '" + raw + "': order must be an integer");
    }
    if (head == "taylor")
        return taylor(m);
    if (head == "rk")
        return rk(m);
    throw ConfigError("flow '" + raw + "': expected exact, taylor(m) or rk(m)");
}

std::string FlowMethod::to_string() const
{
    switch (kind) {
    case Kind::exact: return "exact";
    case Kind::taylor: return "taylor(" + std::to_string(order) + ")";
    case Kind::rk: return "rk(" + std::to_string(order) + ")";
    }
    return "";
}

} // namespace opsplit::flows
