#include "opsplit/jumps/bernoulli.hpp"

namespace opsplit::jumps {

BernoulliJumpParams solve_bernoulli(double c, double t, BernoulliMode mode)
{
    if (!(c >= 0.0) || !(t > 0.0))
        throw DomainError("Bernoulli parameters need C >= 0 and t > 0");
    BernoulliJumpParams p;
    p.mode = mode;
    p.tail_mass = c;
    p.t = t;
    if (c == 0.0)
        return p;
    if (mode == BernoulliMode::one_jump) {
        p.p1 = -std::expm1(-c * t);
    } else {
        const auto [p1, p2] = two_jump_probabilities(c, t);
        p.p1 = p1;
        p.p2 = p2;
    }
    return p;
}

double asymptotic_one_jump_probability(double c, double eps, double alpha, double t)
{
    const double a = -std::pow(eps, alpha) * std::log((t * t + t) * std::pow(eps, -alpha));
    const double p = std::exp(-c * a);
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("asymptotic one-jump probability leaves [0, 1] at this (eps, t)");
    return p;
}

} // namespace opsplit::jumps
