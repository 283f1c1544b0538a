#pragma once

#include <string>

#include "opsplit/flows/flow_method.hpp"
#include "opsplit/flows/noise.hpp"
#include "opsplit/jumps/approx.hpp"
#include "opsplit/schemes/model.hpp"

namespace opsplit::schemes {

enum class SchemeKind { euler_maruyama, nv_a, nv_b, splitting, nv_extrapolated, fujiwara4, one_jump_first_order };

const char* to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(const std::string& name);

/// Formal weak order the scheme is built to achieve.
int documented_order(SchemeKind kind);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::nv_b;
    /// Realization of the drift and Brownian coordinate flows.
    flows::FlowMethod flow = flows::FlowMethod::exact();
    flows::NoiseKind noise = flows::NoiseKind::gaussian;
    jumps::JumpApprox jump;

    /// Cross-checks against the model; throws ConfigError with the offending key.
    void validate(const SdeModel& model) const;
    std::string describe() const;
};

} // namespace opsplit::schemes
