#include "opsplit/algebra/expand.hpp"

#include "opsplit/common/errors.hpp"

namespace opsplit::algebra {

namespace {

Series exponential(const Factor& f, int generators, int order)
{
    Series x(generators, order);
    for (int g : f.generators)
        x.add(Word{{static_cast<std::uint8_t>(g)}}, f.fraction);
    Series result = Series::identity(generators, order);
    Series power = Series::identity(generators, order);
    for (int k = 1; k <= order; ++k) {
        power = power * x;
        power *= Rational(1, k);
        result += power;
    }
    return result;
}

} // namespace

Series expand(const SchemeExpr& expr, int d, int order, const EngineLimits& limits)
{
    if (d < 0)
        throw DomainError("driver dimension must be >= 0");
    const int g = generator_count(d);
    check_capacity(g, order, limits);
    expr.validate(g);

    Series total(g, order);
    for (const auto& term : expr.terms()) {
        Series product = Series::identity(g, order);
        for (const auto& f : term.factors)
            product = product * exponential(f, g, order);
        product *= term.weight;
        total += product;
    }
    return total;
}

Series target_series(int d, int order, const EngineLimits& limits)
{
    if (d < 0)
        throw DomainError("driver dimension must be >= 0");
    const int g = generator_count(d);
    check_capacity(g, order, limits);
    Factor full{Rational(1), {}};
    for (int i = 0; i < g; ++i)
        full.generators.push_back(i);
    return exponential(full, g, order);
}

std::optional<Defect> first_mismatch(const Series& scheme, const Series& target)
{
    const int top = std::max(scheme.order(), target.order());
    for (int k = 0; k <= top; ++k) {
        const Series a = scheme.slice(k);
        const Series b = target.slice(k);
        if (a == b)
            continue;
        // Both maps are sorted by WordOrder; merge to find the smallest differing word.
        auto ia = a.terms().begin();
        auto ib = b.terms().begin();
        WordOrder less;
        while (true) {
            if (ib == b.terms().end() || (ia != a.terms().end() && less(ia->first, ib->first)))
                return Defect{k, ia->first, ia->second, Rational(0)};
            if (ia == a.terms().end() || less(ib->first, ia->first))
                return Defect{k, ib->first, Rational(0), ib->second};
            if (ia->second != ib->second)
                return Defect{k, ia->first, ia->second, ib->second};
            ++ia;
            ++ib;
        }
    }
    return std::nullopt;
}

OrderResult order_of(const SchemeExpr& expr, int d, int max_order, const EngineLimits& limits)
{
    if (max_order < 1)
        throw DomainError("max_order must be >= 1");
    const Series scheme = expand(expr, d, max_order, limits);
    const Series target = target_series(d, max_order, limits);
    auto defect = first_mismatch(scheme, target);
    if (!defect)
        return {max_order, std::nullopt};
    return {defect->degree - 1, defect};
}

} // namespace opsplit::algebra
