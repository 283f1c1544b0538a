#include "opsplit/schemes/runner.hpp"

#include <cmath>

#include "opsplit/common/errors.hpp"

namespace opsplit::schemes {

const jumps::JumpStepper* StepContext::stepper(double fraction) const
{
    for (const auto& [f, s] : jump_steppers)
        if (f == fraction)
            return s.get();
    return nullptr;
}

SchemeRunner::SchemeRunner(SdeModel model, SchemeConfig cfg) : model_(std::move(model)), cfg_(std::move(cfg))
{
    cfg_.validate(model_);
    if (cfg_.kind != SchemeKind::euler_maruyama)
        plan_ = build_scheme_plan(cfg_.kind, model_.brownian_dim());
    else
        plan_.kind = cfg_.kind, plan_.d = model_.brownian_dim();
    strat_drift_ = flows::stratonovich_drift(model_.ito_drift, model_.diffusion);
    jumps_ = model_.has_jumps();
}

int SchemeRunner::component_count() const
{
    return plan_.components.empty() ? 1 : static_cast<int>(plan_.components.size());
}

double SchemeRunner::component_weight(int component) const
{
    if (plan_.components.empty())
        return 1.0;
    return static_cast<double>(plan_.components.at(static_cast<std::size_t>(component)).weight);
}

StepContext SchemeRunner::prepare(double t) const
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("step size must be positive and finite");
    StepContext ctx;
    ctx.t = t;
    if (!jumps_)
        return ctx;
    std::vector<double> fractions;
    if (plan_.components.empty())
        fractions.push_back(1.0);
    else
        for (const auto& f : plan_.jump_fractions())
            fractions.push_back(static_cast<double>(f));
    // The first-order one-jump scheme advances the compensated jump drift by an Euler step.
    const flows::FlowMethod jump_flow =
        cfg_.kind == SchemeKind::one_jump_first_order ? flows::FlowMethod::taylor(1) : cfg_.flow;
    for (double f : fractions)
        ctx.jump_steppers.emplace_back(
            f, std::make_shared<const jumps::JumpStepper>(model_.h, model_.triplet, cfg_.jump, f * t, jump_flow, cfg_.noise));
    return ctx;
}

State SchemeRunner::apply_step(const StepContext& ctx, const PlanStep& s, const State& x, Rng& rng,
                               StepOutcome& out) const
{
    const double c = static_cast<double>(s.fraction);
    const double tau = c * ctx.t;
    const int d = plan_.d;
    const bool euler = cfg_.kind == SchemeKind::one_jump_first_order;
    if (s.generator == 0) {
        if (strat_drift_.is_zero())
            return x;
        return euler ? State(x + tau * strat_drift_(x)) : cfg_.flow.apply(strat_drift_, tau, x);
    }
    if (s.generator <= d) {
        const auto& v = model_.diffusion[static_cast<std::size_t>(s.generator - 1)];
        const double db = flows::sample_noise(cfg_.noise, tau, rng);
        if (v.is_zero())
            return x;
        return euler ? flows::euler_brownian_map(v, db, tau, x) : cfg_.flow.apply(v, db, x);
    }
    if (!jumps_)
        return x;
    const auto* stepper = ctx.stepper(c);
    jumps::JumpDiagnostics diag;
    State y = stepper->step(x, rng, &diag);
    out.jumps += diag.jumps;
    return y;
}

State SchemeRunner::euler_maruyama_step(const StepContext& ctx, const State& x, Rng& rng, StepOutcome& out) const
{
    const double t = ctx.t;
    State y = x + t * model_.ito_drift(x);
    for (const auto& v : model_.diffusion) {
        const double db = flows::sample_noise(cfg_.noise, t, rng);
        y += v(x) * db;
    }
    if (jumps_) {
        const State dy = ctx.jump_steppers.front().second->driver_increment(rng);
        y += model_.h.apply(x, dy);
        out.jumps += dy.isZero(0.0) ? 0 : 1;
    }
    return y;
}

StepOutcome SchemeRunner::one_step(const StepContext& ctx, const State& x, Rng& rng, int component) const
{
    StepOutcome out;
    try {
        if (plan_.components.empty()) {
            out.x = euler_maruyama_step(ctx, x, rng, out);
        } else {
            const auto& comp = plan_.components.at(static_cast<std::size_t>(component));
            std::size_t b = 0;
            if (comp.branches.size() > 1) {
                double u = rng.uniform();
                while (b + 1 < comp.branches.size() && u >= static_cast<double>(comp.branches[b].weight)) {
                    u -= static_cast<double>(comp.branches[b].weight);
                    ++b;
                }
            }
            out.branch = static_cast<int>(b);
            State y = x;
            for (const auto& s : comp.branches[b].steps)
                y = apply_step(ctx, s, y, rng, out);
            out.x = std::move(y);
        }
        if (!all_finite(out.x))
            throw NumericalFailure("non-finite state", out.x);
    } catch (const NumericalFailure& e) {
        out.aborted = true;
        out.reason = e.what();
        out.x = e.last_state().size() ? e.last_state() : x;
    } catch (const SamplerFailure& e) {
        out.aborted = true;
        out.reason = e.what();
        out.x = x;
    }
    return out;
}

PathOutcome SchemeRunner::simulate_path(const StepContext& ctx, int n, const State& x0, Rng& rng, int component) const
{
    if (n < 1)
        throw DomainError("simulate_path: n must be at least 1");
    if (x0.size() != model_.state_dim)
        throw ConfigError("x0 has dimension " + std::to_string(x0.size()) + ", model '" + model_.name +
                          "' has state dimension " + std::to_string(model_.state_dim));
    PathOutcome path;
    path.x = x0;
    for (int k = 0; k < n; ++k) {
        StepOutcome s = one_step(ctx, path.x, rng, component);
        path.jumps += s.jumps;
        path.x = std::move(s.x);
        if (s.aborted) {
            path.aborted = true;
            path.reason = std::move(s.reason);
            break;
        }
    }
    return path;
}

PathOutcome SchemeRunner::simulate_path(double T, int n, const State& x0, Rng& rng, int component) const
{
    if (n < 1)
        throw DomainError("simulate_path: n must be at least 1");
    return simulate_path(prepare(T / n), n, x0, rng, component);
}

} // namespace opsplit::schemes
