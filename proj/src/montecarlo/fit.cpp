#include "opsplit/montecarlo/fit.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "opsplit/common/errors.hpp"

namespace opsplit::montecarlo {

FitResult fit_order(const std::vector<int>& n, const std::vector<double>& errors, const std::vector<double>& stderrs)
{
    if (n.size() != errors.size() || n.size() != stderrs.size())
        throw DomainError("fit_order: n, error and stderr lists differ in length");
    if (n.size() < 3)
        throw DomainError("fit_order: need at least 3 points, got " + std::to_string(n.size()));
    std::vector<double> x, y, se;
    bool any_zero_se = false;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double e = std::abs(errors[i]);
        if (n[i] < 1 || !(e > 0.0) || !std::isfinite(e) || e < 2.0 * stderrs[i])
            continue;
        x.push_back(std::log(static_cast<double>(n[i])));
        y.push_back(std::log(e));
        se.push_back(stderrs[i]);
        any_zero_se = any_zero_se || !(stderrs[i] > 0.0);
    }
    FitResult r;
    r.points_used = static_cast<int>(x.size());
    if (x.size() < 3) {
        r.note = "fewer than 3 points above the noise floor |error| >= 2 stderr";
        return r;
    }
    std::vector<double> w(x.size(), 1.0);
    if (!any_zero_se)
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double rel = se[i] / std::exp(y[i]);
            w[i] = 1.0 / (rel * rel);
        }
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double xm = sx / sw, ym = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - xm) * (x[i] - xm);
        sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) {
        r.note = "all usable points share one n";
        return r;
    }
    const double beta = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double res = y[i] - (ym + beta * (x[i] - xm));
        rss += w[i] * res * res;
    }
    const int dof = static_cast<int>(x.size()) - 2;
    const double s2 = rss / dof;
    const double tq = boost::math::quantile(boost::math::students_t(dof), 0.975);
    r.status = FitResult::Status::ok;
    r.slope = -beta;
    r.intercept = ym - beta * xm;
    r.ci_half_width = tq * std::sqrt(s2 / sxx);
    return r;
}

double romberg_combine(double e_n, double e_2n, int m)
{
    if (m < 1)
        throw DomainError("romberg_combine: m must be at least 1");
    const double p = std::ldexp(1.0, m);
    return (p * e_2n - e_n) / (p - 1.0);
}

} // namespace opsplit::montecarlo
