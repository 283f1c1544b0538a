#pragma once

#include <string>

#include "opsplit/flows/flows.hpp"

namespace opsplit::flows {

/// How a coordinate flow exp(tV)x is realized inside a scheme.
struct FlowMethod {
    enum class Kind { exact, taylor, rk } kind = Kind::exact;
    /// Local order m of b_m or c_m; unused for exact.
    int order = 5;
    ButcherTableau tableau;
    bool allow_fallback = true;

    static FlowMethod exact();
    static FlowMethod taylor(int m);
    static FlowMethod rk(int m);

    State apply(const VectorFieldSpec& v, double t, const State& x) const;

    /// Local order of the flow map; exact flows report a large sentinel.
    int local_order() const;

    /// "exact", "taylor(m)" or "rk(m)".
    static FlowMethod parse(const std::string& text);
    std::string to_string() const;
};

} // namespace opsplit::flows
