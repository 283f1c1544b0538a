#pragma once

#include <optional>

#include "opsplit/algebra/scheme_expr.hpp"
#include "opsplit/algebra/series.hpp"

namespace opsplit::algebra {

/// Number of generators L_0..L_{d+1} for driver dimension d.
inline int generator_count(int d) { return d + 2; }

/// Truncated expansion of the weighted sum of exponential products. Each
/// exp(c t X) becomes sum_{k<=order} (c^k / k!) X^k, products are multiplied
/// left to right with truncation, and terms are summed with their weights.
Series expand(const SchemeExpr& expr, int d, int order, const EngineLimits& limits = {});

/// sum_{k<=order} (L_0 + ... + L_{d+1})^k / k!, the expansion every scheme of
/// that order must reproduce.
Series target_series(int d, int order, const EngineLimits& limits = {});

/// Mismatching coefficient between a scheme expansion and the target.
struct Defect {
    int degree;
    Word word;
    Rational scheme_coefficient;
    Rational target_coefficient;
};

struct OrderResult {
    int order;
    std::optional<Defect> first_defect;
};

/// Largest m <= max_order with expand == target through degree m. When the
/// order falls short, the defect is the first mismatching word of degree
/// order + 1 (degree, then colexicographic order).
OrderResult order_of(const SchemeExpr& expr, int d, int max_order, const EngineLimits& limits = {});

/// First mismatch between two series, scanning degrees upward.
std::optional<Defect> first_mismatch(const Series& scheme, const Series& target);

} // namespace opsplit::algebra
