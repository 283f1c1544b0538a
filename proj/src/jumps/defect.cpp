#include "opsplit/jumps/defect.hpp"

#include "opsplit/common/errors.hpp"

namespace opsplit::jumps {

double per_step_defect(const levy::LevyMeasure& nu, const JumpCoefficients& h, const std::vector<double>& poly,
                       double x, double eps, DefectVariant variant)
{
    if (nu.dimension() != 1 || h.state_dim != 1 || h.driver_dim != 1)
        throw ConfigError("per_step_defect: only one-dimensional models are supported");
    if (!h.affine)
        throw ConfigError("per_step_defect: the jump coefficient must be affine, h(x) = a x + c");
    if (poly.size() > 7)
        throw ConfigError("per_step_defect: test function of degree " + std::to_string(poly.size() - 1) +
                          " is unsupported (degree <= 6)");
    if (!(eps > 0.0))
        throw DomainError("per_step_defect: eps must be positive");
    const double hx = h.affine->slope * x + h.affine->offset;
    const int degree = static_cast<int>(poly.size()) - 1;
    const int k0 = variant == DefectVariant::ignore ? 2 : 3;
    double total = 0.0;
    for (int k = k0; k <= degree; ++k) {
        // f^{(k)}(x) / k! = sum_{j>=k} C(j, k) poly[j] x^{j-k}
        double dk = 0.0;
        for (int j = k; j <= degree; ++j) {
            double binom = 1.0;
            for (int i = 1; i <= k; ++i)
                binom = binom * (j - k + i) / i;
            dk += binom * poly[static_cast<std::size_t>(j)] * std::pow(x, j - k);
        }
        if (dk == 0.0)
            continue;
        const double moment = nu.component(0).power_integral(k, 0.0, eps, k % 2 == 1);
        total += dk * std::pow(hx, k) * moment;
    }
    return total;
}

} // namespace opsplit::jumps
