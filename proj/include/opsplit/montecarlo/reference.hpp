#pragma once

#include <optional>
#include <string>

#include "opsplit/montecarlo/test_function.hpp"
#include "opsplit/schemes/model.hpp"

namespace opsplit::montecarlo {

enum class Provenance { closed_form, quadrature, fine_grid };

const char* to_string(Provenance p);

struct ReferenceValue {
    double value = 0.0;
    /// Monte Carlo error of a fine-grid reference; zero otherwise.
    double stderr_ = 0.0;
    Provenance provenance = Provenance::closed_form;
    /// e.g. "fine_grid(n_ref=2048, paths=800000)".
    std::string detail;
};

/// Moments E[X_T^k], k = 0..p, of a scalar affine model
///   dX = (k0 X + m0) dt + sum_i (s_i X + r_i) dB^i + (a X- + c) dY
/// from the closed linear moment system m' = A m, m(T) = exp(T A) m(0).
/// Empty when the model is not of that form or a needed jump moment diverges.
std::optional<std::vector<double>> affine_moments(const schemes::SdeModel& model, int p, double T, double x0);

/// Closed form (polynomial f on scalar affine models, f = 1 everywhere) or
/// Gauss-Hermite quadrature (any f on scalar geometric Brownian models).
/// Empty when neither applies; the Monte Carlo layer may then fall back to a fine grid.
std::optional<ReferenceValue> analytic_reference(const schemes::SdeModel& model, const TestFunction& f, double T,
                                                 const State& x0);

} // namespace opsplit::montecarlo
