#pragma once

#include <memory>
#include <string>
#include <vector>

#include "opsplit/schemes/build_expr.hpp"

namespace opsplit::schemes {

struct StepOutcome {
    State x;
    int jumps = 0;
    /// Index of the branch drawn for this step (0 for single-branch components).
    int branch = 0;
    bool aborted = false;
    std::string reason;
};

struct PathOutcome {
    State x;
    int jumps = 0;
    bool aborted = false;
    std::string reason;
};

/// Everything that depends on the step size t, built once per n.
struct StepContext {
    double t = 0.0;
    /// (fraction of t, stepper) for every jump fraction in the plan, or one entry at fraction 1.
    std::vector<std::pair<double, std::shared_ptr<const jumps::JumpStepper>>> jump_steppers;

    const jumps::JumpStepper* stepper(double fraction) const;
};

/// Runs a validated (model, config) pair.
class SchemeRunner {
public:
    SchemeRunner(SdeModel model, SchemeConfig cfg);

    const SdeModel& model() const { return model_; }
    const SchemeConfig& config() const { return cfg_; }
    /// Empty components list for euler_maruyama.
    const SchemePlan& plan() const { return plan_; }
    /// Stratonovich drift V_0.
    const flows::VectorFieldSpec& strat_drift() const { return strat_drift_; }

    /// Number of global components and their weights (1 and {1} for single-operator schemes).
    int component_count() const;
    double component_weight(int component) const;

    StepContext prepare(double t) const;

    StepOutcome one_step(const StepContext& ctx, const State& x, Rng& rng, int component = 0) const;

    /// n steps of size T/n from x0 using one RNG stream.
    PathOutcome simulate_path(const StepContext& ctx, int n, const State& x0, Rng& rng, int component = 0) const;
    PathOutcome simulate_path(double T, int n, const State& x0, Rng& rng, int component = 0) const;

private:
    State apply_step(const StepContext& ctx, const PlanStep& s, const State& x, Rng& rng, StepOutcome& out) const;
    State euler_maruyama_step(const StepContext& ctx, const State& x, Rng& rng, StepOutcome& out) const;

    SdeModel model_;
    SchemeConfig cfg_;
    SchemePlan plan_;
    flows::VectorFieldSpec strat_drift_;
    bool jumps_ = false;
};

} // namespace opsplit::schemes
