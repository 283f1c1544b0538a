#include "opsplit/flows/butcher.hpp"

#include <cmath>

#include "opsplit/common/errors.hpp"

namespace opsplit::flows {

std::vector<double> ButcherTableau::nodes() const
{
    std::vector<double> c(b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (double v : a[i])
            c[i] += v;
    return c;
}

void ButcherTableau::validate() const
{
    if (b.empty())
        throw ConfigError("tableau '" + name + "' has no stages");
    if (a.size() != b.size())
        throw ConfigError("tableau '" + name + "': coefficient rows do not match the stage count");
    double sum = 0.0;
    for (double w : b)
        sum += w;
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigError("tableau '" + name + "': weights sum to " + std::to_string(sum) + ", expected 1");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].size() > i)
            throw ConfigError("tableau '" + name + "' is not explicit (row " + std::to_string(i) + ")");
    if (order < 1)
        throw ConfigError("tableau '" + name + "': order must be positive");
}

ButcherTableau euler_tableau()
{
    return {"euler", 1, {{}}, {1.0}};
}

ButcherTableau midpoint_tableau()
{
    return {"midpoint", 2, {{}, {0.5}}, {0.0, 1.0}};
}

ButcherTableau kutta3_tableau()
{
    return {"kutta3", 3, {{}, {0.5}, {-1.0, 2.0}}, {1.0 / 6, 2.0 / 3, 1.0 / 6}};
}

ButcherTableau rk4_tableau()
{
    return {"rk4", 4, {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}}, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}};
}

ButcherTableau rk5_tableau()
{
    return {"butcher5",
            5,
            {{},
             {0.25},
             {0.125, 0.125},
             {0.0, -0.5, 1.0},
             {3.0 / 16, 0.0, 0.0, 9.0 / 16},
             {-3.0 / 7, 2.0 / 7, 12.0 / 7, -12.0 / 7, 8.0 / 7}},
            {7.0 / 90, 0.0, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90}};
}

ButcherTableau tableau_for_order(int order)
{
    switch (order) {
    case 1: return euler_tableau();
    case 2: return midpoint_tableau();
    case 3: return kutta3_tableau();
    case 4: return rk4_tableau();
    case 5: return rk5_tableau();
    default: throw ConfigError("no built-in Runge-Kutta tableau of order " + std::to_string(order) + " (1..5)");
    }
}

} // namespace opsplit::flows
