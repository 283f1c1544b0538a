#pragma once

#include <functional>

namespace opsplit::levy {

/// Default relative tolerance of every measure integral.
inline constexpr double kQuadratureTol = 1e-10;

/// Adaptive double-exponential quadrature on [a, b]; b may be +infinity.
/// Integrable endpoint singularities are allowed.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = kQuadratureTol);

/// int_a^b y^q e^{-lambda y} dy for 0 <= a < b <= infinity. Closed form for
/// lambda = 0, a power series near the origin and quadrature elsewhere.
/// Throws DomainError when the integral diverges.
double power_exp_integral(double q, double lambda, double a, double b);

} // namespace opsplit::levy
