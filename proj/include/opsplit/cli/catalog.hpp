#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opsplit/cli/config_file.hpp"
#include "opsplit/montecarlo/estimate.hpp"
#include "opsplit/schemes/config.hpp"

namespace opsplit::cli {

/// Names accepted by the `model` key.
std::vector<std::string> model_names();

/// Builds the catalog model named by `model`, reading its parameters and the
/// optional jump keys (measure, levy_drift, h) from cfg.
schemes::SdeModel build_model(const ConfigFile& cfg);

/// Reads a `measure` section: family tempered_stable or compound_poisson.
levy::LevyMeasure build_measure(const ConfigFile& section);

/// What the loaded config will be used for; decides which keys are required.
enum class Purpose { run, convergence, defect_scan };

struct ExperimentConfig {
    std::string model_name;
    schemes::SdeModel model;
    std::vector<schemes::SchemeConfig> schemes;
    std::vector<montecarlo::TestFunction> functions;
    double T = 1.0;
    State x0;
    std::vector<int> n_list;
    montecarlo::EstimateOptions estimate;
    enum class Evaluation { monte_carlo, propagation } evaluation = Evaluation::monte_carlo;
    montecarlo::ReferenceOptions reference;
    /// Romberg column m; 0 leaves the estimates uncombined.
    int romberg = 0;
    std::vector<double> eps_list;
    std::filesystem::path out_dir = "results";

    /// Human-readable resolved plan.
    std::string describe() const;
};

/// Parses and cross-validates every key before anything is computed.
ExperimentConfig load_experiment(const ConfigFile& cfg, Purpose purpose);
ExperimentConfig load_experiment_file(const std::filesystem::path& path, Purpose purpose);

} // namespace opsplit::cli
