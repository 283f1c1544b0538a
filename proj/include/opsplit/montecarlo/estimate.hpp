#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opsplit/montecarlo/fit.hpp"
#include "opsplit/montecarlo/reference.hpp"
#include "opsplit/schemes/runner.hpp"

namespace opsplit::montecarlo {

struct EstimateOptions {
    int paths = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    /// Paths per batch; results depend on this but not on the thread count.
    int batch_size = 4096;
    /// Aborted-path fraction above which the run fails.
    double max_abort_rate = 1e-3;
};

/// Monte Carlo estimate of E f(X_T^{(n)}) combined over the plan's global components.
struct PointEstimate {
    int n = 0;
    int paths = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    int aborted = 0;
};

/// One entry per test function, each holding one PointEstimate per n. Path i
/// of component c at step count n uses the stream derive_seed(seed, {n, c, i}).
std::vector<std::vector<PointEstimate>> estimate_points(const schemes::SchemeRunner& runner,
                                                        const std::vector<TestFunction>& fs, double T,
                                                        const State& x0, const std::vector<int>& n_list,
                                                        const EstimateOptions& opts);

struct ReferenceOptions {
    bool allow_fine_grid = false;
    /// Fine grid: Euler-Maruyama with n_ref = factor_n * max(n_list) and factor_paths * paths.
    int fine_grid_factor_n = 64;
    int fine_grid_factor_paths = 8;
};

/// analytic_reference, else the Euler-Maruyama fine grid when allowed, else ConfigError.
ReferenceValue reference_value(const schemes::SdeModel& model, const schemes::SchemeConfig& cfg,
                               const TestFunction& f, double T, const State& x0, const std::vector<int>& n_list,
                               const EstimateOptions& opts, const ReferenceOptions& ref_opts);

struct WeakErrorRow {
    int n = 0;
    int paths = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double reference = 0.0;
    double error = 0.0;
    int aborted = 0;
};

struct WeakErrorReport {
    std::string scheme;
    std::string function;
    double T = 1.0;
    std::uint64_t seed = 0;
    ReferenceValue reference;
    std::vector<WeakErrorRow> rows;
    FitResult fit;
};

/// Weak errors E f(X_T^{(n)}) - reference for every f and n; stderr folds in
/// the reference error bar. The fit is left indeterminate for fewer than 3 n.
std::vector<WeakErrorReport> estimate(const schemes::SchemeRunner& runner, const std::vector<TestFunction>& fs,
                                      double T, const State& x0, const std::vector<int>& n_list,
                                      const EstimateOptions& opts, const ReferenceOptions& ref_opts = {});

} // namespace opsplit::montecarlo
