#pragma once

#include <string>
#include <vector>

namespace opsplit::flows {

/// Explicit Runge-Kutta tableau; a is strictly lower triangular.
struct ButcherTableau {
    std::string name;
    int order = 1;
    std::vector<std::vector<double>> a;
    std::vector<double> b;

    int stages() const { return static_cast<int>(b.size()); }
    std::vector<double> nodes() const;

    /// Throws ConfigError if the weights do not sum to one or a is not explicit.
    void validate() const;
};

ButcherTableau euler_tableau();
ButcherTableau midpoint_tableau();
ButcherTableau kutta3_tableau();
ButcherTableau rk4_tableau();
/// Butcher's six-stage fifth-order method.
ButcherTableau rk5_tableau();

/// Built-in tableau of the given order (1..5).
ButcherTableau tableau_for_order(int order);

} // namespace opsplit::flows
