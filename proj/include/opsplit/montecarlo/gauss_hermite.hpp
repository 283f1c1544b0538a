#pragma once

#include <vector>

namespace opsplit::montecarlo {

inline constexpr int kGaussHermiteNodes = 64;

/// Nodes and probability weights of the n-point Gauss-Hermite rule for
/// E[g(Z)], Z ~ N(0, 1); exact for polynomials of degree < 2n.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached per n; built by Golub-Welsch.
const GaussHermiteRule& gauss_hermite(int n = kGaussHermiteNodes);

} // namespace opsplit::montecarlo
