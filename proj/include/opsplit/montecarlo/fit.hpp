#pragma once

#include <string>
#include <vector>

namespace opsplit::montecarlo {

struct FitResult {
    enum class Status { ok, indeterminate } status = Status::indeterminate;
    /// Slope of log|error| against log(1/n).
    double slope = 0.0;
    /// 95% confidence half-width (Student t).
    double ci_half_width = 0.0;
    double intercept = 0.0;
    int points_used = 0;
    std::string note;
};

/// Weighted least squares of log|e| on log(1/n) with weights e^2 / se^2
/// (equal weights when any se is zero). Points with |e| < 2 se are the
/// noise floor and are excluded. Throws DomainError when fewer than 3 points
/// are supplied; fewer than 3 usable points gives Status::indeterminate.
FitResult fit_order(const std::vector<int>& n, const std::vector<double>& errors, const std::vector<double>& stderrs);

/// (2^m E_2n - E_n) / (2^m - 1); throws DomainError for m < 1.
double romberg_combine(double e_n, double e_2n, int m);

} // namespace opsplit::montecarlo
