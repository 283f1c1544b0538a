#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "opsplit/common/types.hpp"

namespace opsplit::flows {

/// Smooth vector field V on R^N with whatever closed forms are known for it.
struct VectorFieldSpec {
    int dimension = 1;
    std::function<State(const State&)> eval;
    /// exp(tV)x in closed form; t may be negative.
    std::function<State(double, const State&)> flow;
    /// k -> ((V^k e_j)(x))_j for 1 <= k <= iterated_max.
    std::function<State(int, const State&)> iterated;
    int iterated_max = 0;
    std::function<SmallMatrix(const State&)> jacobian;
    /// Set when V(x) = A x; lets the scheme layer treat the model as linear.
    std::optional<SmallMatrix> linear_matrix;
    /// Set when N = 1 and V(x) = k x + m (as {k, m}), beyond the linear and constant cases.
    std::optional<std::array<double, 2>> affine_1d;
    /// Set when V does not depend on x.
    bool constant = false;
    bool linear_growth = true;
    std::string name;

    State operator()(const State& x) const { return eval(x); }
    bool has_flow() const { return static_cast<bool>(flow); }
    bool is_zero() const;
};

VectorFieldSpec zero_field(int dimension);

/// V(x) = c.
VectorFieldSpec constant_field(const State& c);

/// V(x) = A x, with exact flow exp(tA)x and all iterated derivatives A^k x.
VectorFieldSpec linear_field(const SmallMatrix& a);

/// Scalar V(x) = a x.
VectorFieldSpec scalar_linear_field(double a);

/// Scalar V(x) = k x + m with exact flow.
VectorFieldSpec affine_field(double k, double m);

/// Scalar V(x) = a sin(x) + b with closed-form iterated derivatives up to order 8.
VectorFieldSpec sine_field(double a, double b);

/// {k, m} with V(x) = k x + m when V is a known affine field on R.
std::optional<std::array<double, 2>> affine_coefficients(const VectorFieldSpec& v);

/// Jacobian of V at x: the closed form when present, central differences otherwise.
SmallMatrix jacobian(const VectorFieldSpec& v, const State& x);

} // namespace opsplit::flows
