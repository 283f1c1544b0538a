#pragma once

#include <string>
#include <vector>

#include "opsplit/flows/vector_field.hpp"
#include "opsplit/jumps/coefficients.hpp"
#include "opsplit/levy/measure.hpp"

namespace opsplit::schemes {

/// dX = V~_0(X) dt + sum_i V_i(X) dB^i + h(X-) dY with Y a Levy process of triplet (b, 0, nu).
struct SdeModel {
    std::string name;
    int state_dim = 1;
    /// Ito drift V~_0.
    flows::VectorFieldSpec ito_drift;
    /// V_1..V_d.
    std::vector<flows::VectorFieldSpec> diffusion;
    jumps::JumpCoefficients h;
    levy::LevyTriplet triplet;

    int brownian_dim() const { return static_cast<int>(diffusion.size()); }
    int driver_dim() const { return triplet.dimension(); }
    /// False when the jump coordinate is the identity (nu = 0 and b = 0, or h = 0).
    bool has_jumps() const;

    /// Throws ConfigError on inconsistent dimensions.
    void validate() const;
};

/// Model with only a drift and Brownian fields; the jump coordinate is trivial.
SdeModel diffusion_model(std::string name, flows::VectorFieldSpec ito_drift, std::vector<flows::VectorFieldSpec> diffusion);

} // namespace opsplit::schemes
