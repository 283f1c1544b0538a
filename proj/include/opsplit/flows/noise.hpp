#pragma once

#include <array>

#include "opsplit/common/rng.hpp"

namespace opsplit::flows {

enum class NoiseKind { gaussian, three_point };

/// Brownian increment over a step of length t: N(0, t), or sqrt(t) Z with
/// P(Z = +-sqrt 3) = 1/6 and P(Z = 0) = 2/3.
double sample_noise(NoiseKind kind, double t, Rng& rng);

struct NoiseAtom {
    double value;
    double probability;
};

/// Atoms of the three-point variable Z.
std::array<NoiseAtom, 3> three_point_atoms();

const char* to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

} // namespace opsplit::flows
