#pragma once

#include "opsplit/montecarlo/test_function.hpp"
#include "opsplit/schemes/runner.hpp"

namespace opsplit::montecarlo {

/// E[R^p] for one step of size t of a scalar linear model, where X_{k+1} = R X_k:
/// sum over the component's branches of w_b prod_f E[R_f^p]. Brownian factors
/// use Gauss-Hermite quadrature (gaussian) or the three atoms, jump counts a
/// Poisson series, Bernoulli steps their atoms. Throws UnsupportedError when a
/// coordinate map is not linear in x.
double step_moment(const schemes::SchemeRunner& runner, const schemes::StepContext& ctx, int p, int component = 0);

/// E[X_T^{(n)} ^ p] = x0^p sum_i xi_i (step moment of component i)^n, free of Monte Carlo noise.
double deterministic_linear_propagation(const schemes::SchemeRunner& runner, int p, double T, int n, double x0);

/// Same for a polynomial test function.
double deterministic_linear_propagation(const schemes::SchemeRunner& runner, const TestFunction& f, double T, int n,
                                        double x0);

} // namespace opsplit::montecarlo
