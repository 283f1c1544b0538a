#pragma once

#include <Eigen/Dense>

namespace opsplit {

/// Largest state or driver dimension supported without heap allocation.
inline constexpr int kMaxDim = 8;

/// Point in R^N. Storage is inline, so small-dimensional paths never allocate.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// N x d matrix (jump coefficient h(x), Jacobians, covariance roots).
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline State scalar_state(double x)
{
    State s(1);
    s[0] = x;
    return s;
}

inline bool all_finite(const State& x)
{
    return x.allFinite();
}

} // namespace opsplit
