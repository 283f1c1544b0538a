#include "opsplit/flows/noise.hpp"

#include <cmath>

#include "opsplit/common/errors.hpp"

namespace opsplit::flows {

double sample_noise(NoiseKind kind, double t, Rng& rng)
{
    if (!(t >= 0.0))
        throw DomainError("noise over a negative step (t = " + std::to_string(t) + ")");
    if (t == 0.0)
        return 0.0;
    const double scale = std::sqrt(t);
    if (kind == NoiseKind::gaussian)
        return scale * rng.normal();
    const double u = rng.uniform();
    if (u < 1.0 / 6.0)
        return -std::sqrt(3.0) * scale;
    if (u < 1.0 / 3.0)
        return std::sqrt(3.0) * scale;
    return 0.0;
}

std::array<NoiseAtom, 3> three_point_atoms()
{
    return {{{-std::sqrt(3.0), 1.0 / 6.0}, {0.0, 2.0 / 3.0}, {std::sqrt(3.0), 1.0 / 6.0}}};
}

const char* to_string(NoiseKind kind)
{
    return kind == NoiseKind::gaussian ? "gaussian" : "three_point";
}

NoiseKind parse_noise_kind(const std::string& name)
{
    if (name == "gaussian")
        return NoiseKind::gaussian;
    if (name == "three_point")
        return NoiseKind::three_point;
    throw ConfigError("noise: unknown kind '" + name + "' (gaussian | three_point)");
}

} // namespace opsplit::flows
