#pragma once

#include <string>

#include "opsplit/jumps/jump_maps.hpp"
#include "opsplit/levy/eps_rule.hpp"

namespace opsplit::jumps {

/// Choice of approximation for the jump coordinate exp(t L_{d+1}).
struct JumpApprox {
    enum class Kind { cp_truncate, ignore, ar, decomposed } kind = Kind::ignore;
    /// cp_truncate: at most this many jumps per step (kAllJumps: no cap).
    int max_jumps = kAllJumps;
    levy::EpsRule eps_rule;
    BernoulliMode bernoulli = BernoulliMode::one_jump;
    /// Localization of the small-jump Gaussian step and of the Bernoulli tail step.
    levy::Localization small_l{2.0};
    levy::Localization tail_l{0.0};
    int ar_substeps = 1;
    /// Use e^{-C a(eps, t)} instead of 1 - e^{-Ct} for the one-jump probability.
    bool asymptotic_probability = false;

    levy::EpsMode eps_mode() const { return kind == Kind::ar ? levy::EpsMode::ar : levy::EpsMode::ignore; }

    /// cp_truncate(M | inf), ignore(rule), ar(rule),
    /// decomposed(one_jump | two_jump [, r [, rule]]) with l(y) = |y|^r for the Gaussian step.
    static JumpApprox parse(const std::string& text);
    std::string to_string() const;
};

/// Everything one jump-coordinate step of length t needs, resolved once per step size.
class JumpStepper {
public:
    JumpStepper(const JumpCoefficients& h, const levy::LevyTriplet& triplet, const JumpApprox& approx, double t,
                const flows::FlowMethod& flow, flows::NoiseKind noise);

    double step_size() const { return t_; }
    double eps() const { return eps_; }
    const JumpApprox& approx() const { return approx_; }
    bool trivial() const { return trivial_; }
    const flows::FlowMethod& flow() const { return flow_; }

    /// Approximation of exp(t L_{d+1}) applied to x.
    State step(const State& x, Rng& rng, JumpDiagnostics* diag = nullptr) const;

    /// Pieces of the decomposed step, applied drift, Gaussian, Bernoulli by step().
    State drift_part(const State& x) const;
    State gaussian_part(const State& x, Rng& rng) const;
    State bernoulli_part(const State& x, Rng& rng, JumpDiagnostics* diag = nullptr) const;

    /// Increment of the approximating driver over one step (Euler-Maruyama input).
    State driver_increment(Rng& rng) const;

    const CompoundPoissonSpec& compound_poisson() const { return cp_; }
    const CutoffParams& cutoff() const { return ar_.cutoff; }
    const ArParams& ar() const { return ar_; }
    const SmallJumpParams& small_jumps() const { return small_; }
    const TailJumpParams& tail_jumps() const { return tail_; }

private:
    JumpCoefficients h_;
    JumpApprox approx_;
    double t_;
    double eps_ = 1.0;
    flows::FlowMethod flow_;
    flows::NoiseKind noise_;
    bool trivial_ = false;
    CompoundPoissonSpec cp_;
    ArParams ar_;
    SmallJumpParams small_;
    TailJumpParams tail_;
};

} // namespace opsplit::jumps
