#pragma once

#include <cmath>
#include <utility>

#include "opsplit/common/errors.hpp"
#include "opsplit/levy/measure.hpp"

namespace opsplit::jumps {

enum class BernoulliMode { one_jump, two_jump };

/// Success probabilities of the Bernoulli jump steps and the tail mass they
/// were solved against.
struct BernoulliJumpParams {
    BernoulliMode mode = BernoulliMode::one_jump;
    double eps = 0.0;
    levy::Localization l;
    double tail_mass = 0.0;
    double t = 0.0;
    /// P[S = 1] (one jump) or P[S_1 = 1] (two jumps).
    double p1 = 0.0;
    /// P[S_2 = 1]; zero in one-jump mode.
    double p2 = 0.0;
};

/// P1 = Ct - C^2 t^2 / 2 and P2 = Ct / (2 - Ct), so that P1 (1 + P2) = Ct and
/// P1 P2 = C^2 t^2 / 2 hold identically. Works for any field type (double or
/// exact rationals). Throws DomainError unless C > 0, t > 0 and Ct < 1.
template <class T>
std::pair<T, T> two_jump_probabilities(const T& c, const T& t)
{
    if (!(c > 0) || !(t > 0))
        throw DomainError("two-jump Bernoulli parameters need C > 0 and t > 0");
    const T ct = c * t;
    if (!(ct < 1))
        throw DomainError("two-jump Bernoulli parameters need C t < 1 (P2 would leave [0, 1))");
    return {ct - ct * ct / 2, ct / (2 - ct)};
}

/// p = 1 - e^{-Ct} (one jump) or the exact two-jump solution above.
BernoulliJumpParams solve_bernoulli(double c, double t, BernoulliMode mode);

/// Alternative one-jump probability e^{-C a(eps, t)} with
/// a = -eps^alpha log((t^2 + t) eps^{-alpha}), for tempered stable tails.
double asymptotic_one_jump_probability(double c, double eps, double alpha, double t);

} // namespace opsplit::jumps
