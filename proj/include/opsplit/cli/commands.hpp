#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "opsplit/cli/catalog.hpp"

namespace opsplit::cli {

/// Exit codes: 0 success, 1 a check failed or a computation aborted, 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the opsplit tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

struct VerifyAlgebraOptions {
    std::vector<std::string> schemes;
    std::vector<std::string> exprs;
    int d = 1;
    /// 0 picks documented order + 1 for built-ins and 3 for expressions.
    int max_order = 0;
    int oracle_trials = 0;
    std::uint64_t seed = 1;
};
int cmd_verify_algebra(const VerifyAlgebraOptions& opts, std::ostream& out, std::ostream& err);

/// Weak-error reports for every scheme and test function, by Monte Carlo or propagation.
std::vector<montecarlo::WeakErrorReport> compute_reports(const ExperimentConfig& ex, std::ostream& log);

/// Romberg column m over pairs (n, 2n) present in the report's rows.
montecarlo::WeakErrorReport romberg_report(const montecarlo::WeakErrorReport& r, int m);

int cmd_run(const ExperimentConfig& ex, bool dry_run, std::ostream& out);
int cmd_convergence(const ExperimentConfig& ex, bool dry_run, std::ostream& out);
int cmd_defect_scan(const ExperimentConfig& ex, bool dry_run, std::ostream& out);

} // namespace opsplit::cli
