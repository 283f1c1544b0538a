#include "opsplit/levy/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "opsplit/common/errors.hpp"

namespace opsplit::levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double closed_power(double q, double a, double b)
{
    if (q == -1.0)
        return std::log(b / a);
    return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) / (q + 1.0);
}

// sum_k (-lambda)^k / k! int_a^b y^{q+k} dy; used where lambda b is small.
double series(double q, double lambda, double a, double b)
{
    double sum = 0.0, coef = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double term = coef * closed_power(q + k, a, b);
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-17 * std::abs(sum))
            break;
        coef *= -lambda / (k + 1);
    }
    return sum;
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    if (!(b > a))
        return 0.0;
    if (std::isinf(b)) {
        boost::math::quadrature::exp_sinh<double> integrator;
        return integrator.integrate([&](double u) { return f(a + u); }, rel_tol);
    }
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, rel_tol);
}

double power_exp_integral(double q, double lambda, double a, double b)
{
    if (!(b > a))
        return 0.0;
    if (a == 0.0 && q <= -1.0)
        throw DomainError("integral of y^" + std::to_string(q) + " diverges at the origin");
    if (lambda == 0.0) {
        if (std::isinf(b)) {
            if (q >= -1.0)
                throw DomainError("integral of y^" + std::to_string(q) + " diverges at infinity (no exponential tempering)");
            return -std::pow(a, q + 1.0) / (q + 1.0);
        }
        return closed_power(q, a, b);
    }
    const double split = std::min(b, std::max(a, 2.0 / lambda));
    double total = split > a ? series(q, lambda, a, split) : 0.0;
    if (b > split)
        total += integrate([q, lambda](double y) { return std::exp(q * std::log(y) - lambda * y); }, split, b);
    return total;
}

} // namespace opsplit::levy
