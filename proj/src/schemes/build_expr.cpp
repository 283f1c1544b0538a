#include "opsplit/schemes/build_expr.hpp"

#include <algorithm>

#include "opsplit/common/errors.hpp"

namespace opsplit::schemes {

namespace {

using algebra::Rational;

std::vector<PlanStep> ascending(int d, const Rational& c)
{
    std::vector<PlanStep> s;
    for (int i = 0; i <= d + 1; ++i)
        s.push_back({i, c});
    return s;
}

std::vector<PlanStep> descending(int d, const Rational& c)
{
    auto s = ascending(d, c);
    std::reverse(s.begin(), s.end());
    return s;
}

std::vector<PlanStep> twice(std::vector<PlanStep> s)
{
    const auto copy = s;
    s.insert(s.end(), copy.begin(), copy.end());
    return s;
}

PlanComponent single(Rational weight, std::vector<PlanStep> steps)
{
    return PlanComponent{weight, {PlanBranch{Rational(1), std::move(steps)}}};
}

PlanComponent coin(Rational weight, std::vector<PlanStep> a, std::vector<PlanStep> b)
{
    return PlanComponent{weight, {PlanBranch{Rational(1, 2), std::move(a)}, PlanBranch{Rational(1, 2), std::move(b)}}};
}

} // namespace

std::vector<Rational> SchemePlan::jump_fractions() const
{
    std::vector<Rational> out;
    for (const auto& c : components)
        for (const auto& b : c.branches)
            for (const auto& s : b.steps)
                if (s.generator == d + 1 && std::find(out.begin(), out.end(), s.fraction) == out.end())
                    out.push_back(s.fraction);
    return out;
}

SchemePlan build_scheme_plan(SchemeKind kind, int d)
{
    if (d < 0)
        throw ConfigError("scheme: Brownian dimension must be nonnegative");
    SchemePlan plan;
    plan.kind = kind;
    plan.d = d;
    const Rational one(1), half(1, 2);
    switch (kind) {
    case SchemeKind::euler_maruyama:
        throw UnsupportedError("euler_maruyama is not a product of coordinate exponentials");
    case SchemeKind::nv_a: {
        // e^{t/2 L0} (e^{tL1} ... e^{tL_{d+1}} or reversed) e^{t/2 L0}
        std::vector<PlanStep> inner_up, inner_down;
        for (int i = 1; i <= d + 1; ++i)
            inner_up.push_back({i, one});
        inner_down.assign(inner_up.rbegin(), inner_up.rend());
        auto wrap = [&](std::vector<PlanStep> inner) {
            inner.insert(inner.begin(), PlanStep{0, half});
            inner.push_back(PlanStep{0, half});
            return inner;
        };
        plan.components.push_back(coin(one, wrap(inner_up), wrap(inner_down)));
        break;
    }
    case SchemeKind::nv_b: plan.components.push_back(coin(one, ascending(d, one), descending(d, one))); break;
    case SchemeKind::splitting: {
        std::vector<PlanStep> s;
        for (int i = 0; i <= d; ++i)
            s.push_back({i, half});
        s.push_back({d + 1, one});
        for (int i = d; i >= 0; --i)
            s.push_back({i, half});
        plan.components.push_back(single(one, std::move(s)));
        break;
    }
    case SchemeKind::nv_extrapolated:
        plan.components.push_back(single(half, ascending(d, one)));
        plan.components.push_back(single(half, descending(d, one)));
        break;
    case SchemeKind::fujiwara4:
        plan.components.push_back(coin(Rational(4, 3), twice(ascending(d, half)), twice(descending(d, half))));
        plan.components.push_back(coin(Rational(-1, 3), ascending(d, one), descending(d, one)));
        break;
    case SchemeKind::one_jump_first_order: plan.components.push_back(single(one, ascending(d, one))); break;
    }
    return plan;
}

algebra::SchemeExpr build_scheme_expr(const SchemePlan& plan)
{
    std::vector<algebra::ProductTerm> terms;
    for (const auto& c : plan.components)
        for (const auto& b : c.branches) {
            algebra::ProductTerm term;
            term.weight = c.weight * b.weight;
            for (const auto& s : b.steps)
                term.factors.push_back(algebra::Factor{s.fraction, {s.generator}});
            terms.push_back(std::move(term));
        }
    return algebra::SchemeExpr(std::move(terms));
}

algebra::SchemeExpr build_scheme_expr(SchemeKind kind, int d)
{
    return build_scheme_expr(build_scheme_plan(kind, d));
}

} // namespace opsplit::schemes
