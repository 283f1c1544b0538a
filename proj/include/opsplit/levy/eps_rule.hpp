#pragma once

#include <string>

#include "opsplit/levy/measure.hpp"

namespace opsplit::levy {

/// Which moment the cutoff must make small: sigma^2(eps) for plain truncation,
/// the third absolute moment when the Gaussian correction is used.
enum class EpsMode { ignore, ar };

/// Largest eps <= 1 with int_{|y|<=eps} |y|^k nu <= t^{M+1} (k = 2 for ignore,
/// k = 3 for ar), found by bisection in log eps to relative tolerance 1e-9.
/// Returns 1 when eps = 1 already satisfies the bound; throws InfeasibleError
/// when no eps >= 1e-12 does.
double eps_for_order(const LevyMeasure& nu, double t, int M, EpsMode mode);

/// t^{1/(3 - alpha)}.
double eps_power_rule(double t, double alpha);

/// How the cutoff is chosen for a given step size.
struct EpsRule {
    enum class Kind { bisect, power, exponent, fixed } kind = Kind::power;
    /// M for bisect, the exponent for `exponent`, the value for `fixed`.
    double value = 0.0;

    /// Resolve eps for step t; alpha is the measure's activity index.
    double resolve(const LevyMeasure& nu, double t, EpsMode mode) const;

    /// "bisect(M)", "power", "power(x)" (eps = t^x) or "fixed(eps)".
    static EpsRule parse(const std::string& text);
    std::string to_string() const;
};

} // namespace opsplit::levy
