#include "opsplit/jumps/coefficients.hpp"

#include "opsplit/common/errors.hpp"

namespace opsplit::jumps {

State JumpCoefficients::apply(const State& x, const State& y) const
{
    if (affine)
        return scalar_state((affine->slope * x[0] + affine->offset) * y[0]);
    return eval(x) * y;
}

JumpCoefficients affine_jump(double slope, double offset)
{
    JumpCoefficients h;
    h.eval = [slope, offset](const State& x) {
        SmallMatrix m(1, 1);
        m(0, 0) = slope * x[0] + offset;
        return m;
    };
    h.affine = Affine1D{slope, offset};
    h.constant = slope == 0.0;
    h.lipschitz = std::abs(slope);
    h.name = "affine";
    return h;
}

JumpCoefficients constant_jump(const SmallMatrix& hm)
{
    JumpCoefficients h;
    h.state_dim = static_cast<int>(hm.rows());
    h.driver_dim = static_cast<int>(hm.cols());
    h.eval = [hm](const State&) { return hm; };
    if (hm.rows() == 1 && hm.cols() == 1)
        h.affine = Affine1D{0.0, hm(0, 0)};
    h.constant = true;
    h.lipschitz = 0.0;
    h.name = "constant";
    return h;
}

JumpCoefficients zero_jump(int state_dim, int driver_dim)
{
    JumpCoefficients h = constant_jump(SmallMatrix::Zero(state_dim, driver_dim));
    h.name = "zero";
    return h;
}

flows::VectorFieldSpec jump_drift_field(const JumpCoefficients& h, const State& c)
{
    if (c.size() != h.driver_dim)
        throw ConfigError("jump drift: driver vector has the wrong dimension");
    if (h.affine)
        return flows::affine_field(h.affine->slope * c[0], h.affine->offset * c[0]);
    if (h.constant)
        return flows::constant_field(State(h.eval(State::Zero(h.state_dim)) * c));
    flows::VectorFieldSpec v;
    v.dimension = h.state_dim;
    v.eval = [h, c](const State& x) { return State(h.eval(x) * c); };
    v.name = "jump_drift";
    return v;
}

} // namespace opsplit::jumps
