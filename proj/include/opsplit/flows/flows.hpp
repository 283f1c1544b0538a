#pragma once

#include <vector>

#include "opsplit/flows/butcher.hpp"
#include "opsplit/flows/vector_field.hpp"

namespace opsplit::flows {

struct ReferenceSolverOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    std::size_t max_steps = 1'000'000;
};

/// exp(tV)x: the closed form when supplied, otherwise an adaptive Dormand-Prince
/// solve (backward in time for t < 0). Throws NumericalFailure with the last
/// accepted state if the solver stalls or produces non-finite values.
State exp_map(const VectorFieldSpec& v, double t, const State& x, const ReferenceSolverOptions& opts = {});

/// True when taylor_flow of order m must fall back to finite differences.
bool taylor_uses_fallback(const VectorFieldSpec& v, int m);

/// b_m(t, V)x = sum_{k<=m} t^k/k! (V^k e_j)(x). Missing closed-form derivatives
/// are replaced by nested central differences when allow_fallback is set,
/// otherwise ConfigError.
State taylor_flow(const VectorFieldSpec& v, int m, double t, const State& x, bool allow_fallback = true);

/// c_m(t, V)x = x + t sum_i b_i k_i with k_i = V(x + t sum_{j<i} a_ij k_j).
State rk_flow(const ButcherTableau& tab, const VectorFieldSpec& v, double t, const State& x);

/// V_0 = V~_0 - 1/2 sum_i (DV_i) V_i. Linear inputs give a linear result with
/// exact flow; constant V_i leave V~_0 unchanged.
VectorFieldSpec stratonovich_drift(const VectorFieldSpec& ito_drift, const std::vector<VectorFieldSpec>& diffusion);

/// Euler-Maruyama map for one Brownian coordinate written in Stratonovich form:
/// x + V(x) dB + t/2 (DV V)(x). Its one-step law matches exp(t V^2/2) to first order.
State euler_brownian_map(const VectorFieldSpec& v, double dB, double t, const State& x);

} // namespace opsplit::flows
