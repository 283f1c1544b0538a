#include "opsplit/jumps/jump_maps.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "opsplit/common/errors.hpp"
#include "opsplit/levy/psd.hpp"

namespace opsplit::jumps {

namespace {

void check_finite(const State& x, const char* where)
{
    if (!all_finite(x))
        throw NumericalFailure(std::string(where) + ": non-finite state", x);
}

// Pure jumps over a step of length t (no drift).
State poisson_jumps(const JumpCoefficients& h, const CutoffParams& p, double t, State x, Rng& rng, JumpDiagnostics* diag)
{
    if (p.intensity <= 0.0)
        return x;
    const auto n = rng.poisson(p.intensity * t);
    for (std::uint64_t i = 0; i < n; ++i)
        x += h.apply(x, p.jumps.sample(rng));
    if (diag)
        diag->jumps += static_cast<int>(n);
    check_finite(x, "poisson jumps");
    return x;
}

} // namespace

CompoundPoissonSpec make_compound_poisson(const levy::LevyMeasure& nu)
{
    if (nu.infinite_activity())
        throw ConfigError("compound Poisson flow needs a finite-activity measure, got " + nu.describe());
    CompoundPoissonSpec cp;
    cp.intensity = nu.integral(0.0, 0.0, levy::kInf);
    cp.jumps = levy::RegionSampler(nu, 0.0, levy::kInf, {});
    return cp;
}

CutoffParams make_cutoff(const JumpCoefficients& h, const levy::LevyTriplet& triplet, double eps)
{
    if (!(eps > 0.0))
        throw DomainError("cutoff: eps must be positive");
    CutoffParams p;
    p.eps = eps;
    p.jumps = levy::RegionSampler(triplet.measure, eps, levy::kInf, {});
    p.intensity = p.jumps.mass();
    p.drift = triplet.drift - triplet.measure.first_moment(eps, 1.0);
    p.drift_field = jump_drift_field(h, p.drift);
    return p;
}

SmallJumpParams make_small_jumps(const levy::LevyMeasure& nu, double eps, const levy::Localization& l)
{
    SmallJumpParams p;
    p.eps = eps;
    p.l = l;
    p.lambda_eps = levy::tail_mass(nu, eps, l, levy::Region::small);
    p.jumps = levy::RegionSampler(nu, 0.0, eps, l);
    return p;
}

TailJumpParams make_tail_jumps(const levy::LevyMeasure& nu, double eps, const levy::Localization& l, double t,
                               BernoulliMode mode)
{
    if (mode == BernoulliMode::two_jump && l.r != 0.0)
        throw ConfigError("two-jump step is defined for the localization l = 1 only");
    TailJumpParams p;
    p.jumps = levy::RegionSampler(nu, eps, levy::kInf, l);
    p.bernoulli = solve_bernoulli(p.jumps.mass(), t, mode);
    p.bernoulli.eps = eps;
    p.bernoulli.l = l;
    return p;
}

ArParams make_ar(const JumpCoefficients& h, const levy::LevyTriplet& triplet, double eps, int substeps)
{
    if (substeps < 1)
        throw ConfigError("ar: substep count must be at least 1");
    ArParams p;
    p.cutoff = make_cutoff(h, triplet, eps);
    p.sigma_root = levy::sqrt_psd(levy::sigma_matrix(triplet.measure, eps));
    p.substeps = substeps;
    for (int j = 0; j < p.sigma_root.cols(); ++j) {
        const State r = p.sigma_root.col(j);
        if (!r.isZero(0.0))
            p.gaussian_fields.push_back(jump_drift_field(h, r));
    }
    if (h.affine && !p.gaussian_fields.empty()) {
        // U(x) = (a x + c) s gives (DU) U = a s^2 (a x + c)
        const double s = p.sigma_root(0, 0);
        const double c = p.cutoff.drift[0] - 0.5 * h.affine->slope * s * s;
        p.drift_field = flows::affine_field(h.affine->slope * c, h.affine->offset * c);
    } else {
        p.drift_field = flows::stratonovich_drift(p.cutoff.drift_field, p.gaussian_fields);
    }
    return p;
}

State compound_poisson_flow(const JumpCoefficients& h, const CompoundPoissonSpec& cp, double t, const State& x, int M,
                            Rng& rng, JumpDiagnostics* diag)
{
    if (!(t >= 0.0))
        throw DomainError("compound_poisson_flow: negative step");
    if (M == 0 || cp.intensity <= 0.0)
        return x;
    std::uint64_t n = rng.poisson(cp.intensity * t);
    if (M > 0)
        n = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(M));
    State y = x;
    for (std::uint64_t i = 0; i < n; ++i)
        y += h.apply(y, cp.jumps.sample(rng));
    if (diag)
        diag->jumps += static_cast<int>(n);
    check_finite(y, "compound_poisson_flow");
    return y;
}

State ignore_small_flow(const JumpCoefficients& h, const CutoffParams& p, double t, const State& x,
                        const flows::FlowMethod& flow, Rng& rng, JumpDiagnostics* diag)
{
    const auto n = p.intensity > 0.0 ? rng.poisson(p.intensity * t) : 0;
    thread_local std::vector<double> times;
    times.resize(n);
    for (auto& s : times)
        s = t * rng.uniform();
    std::sort(times.begin(), times.end());
    State y = x;
    double now = 0.0;
    for (double s : times) {
        y = flow.apply(p.drift_field, s - now, y);
        y += h.apply(y, p.jumps.sample(rng));
        now = s;
    }
    y = flow.apply(p.drift_field, t - now, y);
    if (diag)
        diag->jumps += static_cast<int>(n);
    check_finite(y, "ignore_small_flow");
    return y;
}

State ar_flow(const JumpCoefficients& h, const ArParams& p, double t, const State& x, const flows::FlowMethod& flow,
              flows::NoiseKind noise, Rng& rng, JumpDiagnostics* diag)
{
    if (p.gaussian_fields.empty())
        return ignore_small_flow(h, p.cutoff, t, x, flow, rng, diag);
    const double s = t / p.substeps;
    State y = x;
    for (int k = 0; k < p.substeps; ++k) {
        y = flow.apply(p.drift_field, 0.5 * s, y);
        for (const auto& u : p.gaussian_fields)
            y = flow.apply(u, flows::sample_noise(noise, s, rng), y);
        y = poisson_jumps(h, p.cutoff, s, y, rng, diag);
        y = flow.apply(p.drift_field, 0.5 * s, y);
    }
    check_finite(y, "ar_flow");
    return y;
}

State decomposed_drift_step(const JumpCoefficients&, const CutoffParams& p, double t, const State& x,
                            const flows::FlowMethod& flow)
{
    return flow.apply(p.drift_field, t, x);
}

State small_jump_gaussian_step(const JumpCoefficients& h, const SmallJumpParams& p, double t, const State& x, Rng& rng)
{
    if (p.lambda_eps <= 0.0 || p.jumps.empty())
        return x;
    const State y = p.jumps.sample(rng);
    const double xi = rng.normal();
    const double scale = xi * std::sqrt(t * p.lambda_eps / p.l(y.norm()));
    State out = x + h.apply(x, y) * scale;
    check_finite(out, "small_jump_gaussian_step");
    return out;
}

State one_jump_step(const JumpCoefficients& h, const TailJumpParams& p, const State& x, Rng& rng, JumpDiagnostics* diag)
{
    if (p.bernoulli.p1 <= 0.0 || !rng.bernoulli(p.bernoulli.p1))
        return x;
    const State z = p.jumps.sample(rng);
    if (diag) {
        diag->jumps += 1;
        diag->branch = 1;
    }
    State out = x + h.apply(x, z) / p.bernoulli.l(z.norm());
    check_finite(out, "one_jump_step");
    return out;
}

State two_jump_step(const JumpCoefficients& h, const TailJumpParams& p, const State& x, Rng& rng, JumpDiagnostics* diag)
{
    if (p.bernoulli.p1 <= 0.0 || !rng.bernoulli(p.bernoulli.p1))
        return x;
    State y = x + h.apply(x, p.jumps.sample(rng));
    int count = 1;
    if (rng.bernoulli(p.bernoulli.p2)) {
        y += h.apply(y, p.jumps.sample(rng));
        ++count;
    }
    if (diag) {
        diag->jumps += count;
        diag->branch = count;
    }
    check_finite(y, "two_jump_step");
    return y;
}

} // namespace opsplit::jumps
