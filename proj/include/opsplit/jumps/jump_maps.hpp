#pragma once

#include <vector>

#include "opsplit/flows/flow_method.hpp"
#include "opsplit/flows/noise.hpp"
#include "opsplit/jumps/bernoulli.hpp"
#include "opsplit/jumps/coefficients.hpp"
#include "opsplit/levy/sampler.hpp"

namespace opsplit::jumps {

/// Unbounded jump count for compound_poisson_flow.
inline constexpr int kAllJumps = -1;

/// Finite-activity driver: intensity and a sampler for the normalized jump law.
struct CompoundPoissonSpec {
    double intensity = 0.0;
    levy::RegionSampler jumps;
};

CompoundPoissonSpec make_compound_poisson(const levy::LevyMeasure& finite_nu);

/// Jumps above eps and the compensated drift b - int_{eps<|y|<=1} y nu,
/// together with the vector field x -> h(x)(that drift).
struct CutoffParams {
    double eps = 1.0;
    double intensity = 0.0;
    levy::RegionSampler jumps;
    State drift;
    flows::VectorFieldSpec drift_field;
};

CutoffParams make_cutoff(const JumpCoefficients& h, const levy::LevyTriplet& triplet, double eps);

/// Localized small-jump law F_eps^l with lambda_eps = int_{|y|<=eps} l nu.
struct SmallJumpParams {
    double eps = 0.0;
    levy::Localization l;
    double lambda_eps = 0.0;
    levy::RegionSampler jumps;
};

SmallJumpParams make_small_jumps(const levy::LevyMeasure& nu, double eps, const levy::Localization& l);

/// Localized tail law G_{eps,l} with the Bernoulli probabilities solved against C_{eps,l}.
struct TailJumpParams {
    BernoulliJumpParams bernoulli;
    levy::RegionSampler jumps;
};

TailJumpParams make_tail_jumps(const levy::LevyMeasure& nu, double eps, const levy::Localization& l, double t,
                               BernoulliMode mode);

/// Number of jumps and Bernoulli branch taken by the last map, for diagnostics.
struct JumpDiagnostics {
    int jumps = 0;
    int branch = 0;
};

/// N ~ Poisson(lambda t); applies min(N, M) steps x <- x + h(x) J (M = kAllJumps: no cap).
State compound_poisson_flow(const JumpCoefficients& h, const CompoundPoissonSpec& cp, double t, const State& x, int M,
                            Rng& rng, JumpDiagnostics* diag = nullptr);

/// Exact simulation of the eps-truncated driver: Poisson(C_eps t) jumps at
/// uniform order statistics, with the compensated drift flow in between.
State ignore_small_flow(const JumpCoefficients& h, const CutoffParams& p, double t, const State& x,
                        const flows::FlowMethod& flow, Rng& rng, JumpDiagnostics* diag = nullptr);

/// Gaussian-corrected driver: the truncated driver plus h(x) Sigma_eps^{1/2} dW,
/// advanced by Strang substeps (drift t/2, Gaussian t, jumps t, drift t/2).
/// The drift field carries the Stratonovich correction of the Gaussian columns
/// x -> h(x) Sigma_eps^{1/2} e_j.
struct ArParams {
    CutoffParams cutoff;
    SmallMatrix sigma_root;
    flows::VectorFieldSpec drift_field;
    std::vector<flows::VectorFieldSpec> gaussian_fields;
    int substeps = 1;
};

ArParams make_ar(const JumpCoefficients& h, const levy::LevyTriplet& triplet, double eps, int substeps);

State ar_flow(const JumpCoefficients& h, const ArParams& p, double t, const State& x, const flows::FlowMethod& flow,
              flows::NoiseKind noise, Rng& rng, JumpDiagnostics* diag = nullptr);

/// ODE step along x -> h(x)(b - int_{eps<|y|<=1} y nu).
State decomposed_drift_step(const JumpCoefficients& h, const CutoffParams& p, double t, const State& x,
                            const flows::FlowMethod& flow);

/// x + h(x) Y xi sqrt(t lambda_eps / l(Y)) with Y ~ F_eps^l, xi ~ N(0, 1).
State small_jump_gaussian_step(const JumpCoefficients& h, const SmallJumpParams& p, double t, const State& x, Rng& rng);

/// With probability p: x + h(x) Z / l(Z), Z ~ G_{eps,l}; otherwise x.
State one_jump_step(const JumpCoefficients& h, const TailJumpParams& p, const State& x, Rng& rng,
                    JumpDiagnostics* diag = nullptr);

/// S_1 = 0: x; S_1 = 1, S_2 = 0: x + h(x) Z_1; both: x + h(x) Z_1 + h(x + h(x) Z_1) Z_2.
State two_jump_step(const JumpCoefficients& h, const TailJumpParams& p, const State& x, Rng& rng,
                    JumpDiagnostics* diag = nullptr);

} // namespace opsplit::jumps
