#pragma once

#include <functional>
#include <optional>
#include <string>

#include "opsplit/common/types.hpp"
#include "opsplit/flows/vector_field.hpp"

namespace opsplit::jumps {

/// h(x) = slope x + offset for N = d = 1.
struct Affine1D {
    double slope;
    double offset;
};

/// Jump coefficient h: R^N -> R^{N x d}.
struct JumpCoefficients {
    int state_dim = 1;
    int driver_dim = 1;
    std::function<SmallMatrix(const State&)> eval;
    std::optional<Affine1D> affine;
    bool constant = false;
    double lipschitz = 1.0;
    bool bounded_derivatives = true;
    std::string name;

    SmallMatrix operator()(const State& x) const { return eval(x); }
    /// h(x) y.
    State apply(const State& x, const State& y) const;
};

JumpCoefficients affine_jump(double slope, double offset);
JumpCoefficients constant_jump(const SmallMatrix& h);
JumpCoefficients zero_jump(int state_dim, int driver_dim);

/// x -> h(x) c, with closed forms when h is affine or constant.
flows::VectorFieldSpec jump_drift_field(const JumpCoefficients& h, const State& c);

} // namespace opsplit::jumps
