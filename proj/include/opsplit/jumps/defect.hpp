#pragma once

#include <vector>

#include "opsplit/jumps/coefficients.hpp"
#include "opsplit/levy/measure.hpp"

namespace opsplit::jumps {

enum class DefectVariant { ignore, ar };

/// Exact generator defect (L_{d+1} - L^eps_{d+1}) f(x) for d = N = 1, affine h
/// and polynomial f = sum_k poly[k] x^k of degree <= 6:
///   sum_{k >= k0} f^{(k)}(x) / k! h(x)^k int_{|y|<=eps} y^k nu(dy)
/// with k0 = 2 (ignore) or 3 (ar, whose Gaussian term matches the second moment).
/// Throws ConfigError for other shapes.
double per_step_defect(const levy::LevyMeasure& nu, const JumpCoefficients& h, const std::vector<double>& poly,
                       double x, double eps, DefectVariant variant);

} // namespace opsplit::jumps
