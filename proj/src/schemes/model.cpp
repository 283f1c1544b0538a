#include "opsplit/schemes/model.hpp"

#include "opsplit/common/errors.hpp"

namespace opsplit::schemes {

bool SdeModel::has_jumps() const
{
    if (triplet.measure.is_zero() && triplet.drift.isZero(0.0))
        return false;
    if (h.constant && h.eval(State::Zero(state_dim)).isZero(0.0))
        return false;
    return true;
}

void SdeModel::validate() const
{
    auto fail = [&](const std::string& what) { throw ConfigError("model '" + name + "': " + what); };
    if (state_dim < 1 || state_dim > kMaxDim)
        fail("state dimension must lie in 1.." + std::to_string(kMaxDim));
    if (!ito_drift.eval || ito_drift.dimension != state_dim)
        fail("drift must be a field on R^" + std::to_string(state_dim));
    for (std::size_t i = 0; i < diffusion.size(); ++i)
        if (!diffusion[i].eval || diffusion[i].dimension != state_dim)
            fail("diffusion field " + std::to_string(i + 1) + " must be a field on R^" + std::to_string(state_dim));
    if (brownian_dim() > kMaxDim)
        fail("at most " + std::to_string(kMaxDim) + " Brownian drivers are supported");
    if (h.state_dim != state_dim)
        fail("h has " + std::to_string(h.state_dim) + " rows, state dimension is " + std::to_string(state_dim));
    if (h.driver_dim != driver_dim())
        fail("h has " + std::to_string(h.driver_dim) + " columns, the Levy driver has dimension " +
             std::to_string(driver_dim()));
    if (triplet.drift.size() != driver_dim())
        fail("Levy drift b has dimension " + std::to_string(triplet.drift.size()) + ", expected " +
             std::to_string(driver_dim()));
}

SdeModel diffusion_model(std::string name, flows::VectorFieldSpec ito_drift, std::vector<flows::VectorFieldSpec> diffusion)
{
    SdeModel m;
    m.name = std::move(name);
    m.state_dim = ito_drift.dimension;
    m.ito_drift = std::move(ito_drift);
    m.diffusion = std::move(diffusion);
    m.h = jumps::zero_jump(m.state_dim, 1);
    m.triplet = levy::LevyTriplet{State::Zero(1), levy::LevyMeasure::zero(1)};
    return m;
}

} // namespace opsplit::schemes
