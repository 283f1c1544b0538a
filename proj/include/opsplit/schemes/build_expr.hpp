#pragma once

#include <vector>

#include "opsplit/algebra/scheme_expr.hpp"
#include "opsplit/schemes/config.hpp"

namespace opsplit::schemes {

/// exp(fraction * t * L_generator); generator 0 is the drift, 1..d the
/// Brownian fields and d+1 the jump coordinate.
struct PlanStep {
    int generator = 0;
    algebra::Rational fraction;
};

/// Coordinate maps listed in application order (first entry acts first).
struct PlanBranch {
    algebra::Rational weight;
    std::vector<PlanStep> steps;
};

/// One per-step operator: a probability mixture of branches, drawn afresh at every step.
struct PlanComponent {
    algebra::Rational weight;
    std::vector<PlanBranch> branches;
};

/// Global combination sum_i xi_i (Q^{[i]}_{T/n})^n; each component runs as its own set of full paths.
struct SchemePlan {
    SchemeKind kind = SchemeKind::nv_b;
    int d = 0;
    std::vector<PlanComponent> components;

    /// Distinct step fractions used by the jump coordinate.
    std::vector<algebra::Rational> jump_fractions() const;
};

/// Throws UnsupportedError for euler_maruyama.
SchemePlan build_scheme_plan(SchemeKind kind, int d);

/// The one-step operator sum_i xi_i sum_b w_b prod exp(c t L) for the symbolic engine.
algebra::SchemeExpr build_scheme_expr(const SchemePlan& plan);
algebra::SchemeExpr build_scheme_expr(SchemeKind kind, int d);

} // namespace opsplit::schemes
