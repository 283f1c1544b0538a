#include "opsplit/cli/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "opsplit/common/errors.hpp"
#include "opsplit/montecarlo/reference.hpp"
#include "opsplit/schemes/build_expr.hpp"
#include "opsplit/schemes/runner.hpp"

namespace opsplit::cli {

namespace {

using flows::VectorFieldSpec;

struct ModelEntry {
    std::string name;
    std::string summary;
    bool needs_measure;
    std::function<schemes::SdeModel(const ConfigFile&)> build;
};

const std::vector<ModelEntry>& catalog()
{
    static const std::vector<ModelEntry> entries = {
        {"gbm", "dX = mu X dt + sigma X dB", false,
         [](const ConfigFile& c) {
             double mu = c.number("mu");
             double sigma = c.number("sigma");
             return schemes::diffusion_model("gbm", flows::scalar_linear_field(mu), {flows::scalar_linear_field(sigma)});
         }},
        {"ou", "dX = theta (mean - X) dt + sigma dB", false,
         [](const ConfigFile& c) {
             double theta = c.number("theta");
             double sigma = c.number("sigma");
             double mean = c.number_or("mean", 0.0);
             return schemes::diffusion_model("ou", flows::affine_field(-theta, theta * mean),
                                             {flows::constant_field(State::Constant(1, sigma))});
         }},
        {"sin_drift", "dX = (a sin X + b) dt + sigma dB", false,
         [](const ConfigFile& c) {
             double a = c.number_or("a", 1.0);
             double b = c.number_or("b", 0.0);
             double sigma = c.number_or("sigma", 0.2);
             std::vector<VectorFieldSpec> diffusion;
             if (sigma != 0.0)
                 diffusion.push_back(flows::constant_field(State::Constant(1, sigma)));
             return schemes::diffusion_model("sin_drift", flows::sine_field(a, b), std::move(diffusion));
         }},
        {"jump_linear", "dX = mu X dt + sigma X dB + h(X-) dY", true,
         [](const ConfigFile& c) {
             double mu = c.number_or("mu", 0.0);
             double sigma = c.number_or("sigma", 0.0);
             std::vector<VectorFieldSpec> diffusion;
             if (sigma != 0.0)
                 diffusion.push_back(flows::scalar_linear_field(sigma));
             return schemes::diffusion_model("jump_linear", flows::scalar_linear_field(mu), std::move(diffusion));
         }},
        {"zero", "dX = 0", false,
         [](const ConfigFile&) { return schemes::diffusion_model("zero", flows::zero_field(1), {flows::zero_field(1)}); }},
    };
    return entries;
}

jumps::JumpCoefficients parse_h(const ConfigFile& cfg)
{
    std::string s = cfg.text_or("h", "x");
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
    if (s == "x")
        return jumps::affine_jump(1.0, 0.0);
    if (s == "1")
        return jumps::affine_jump(0.0, 1.0);
    if (s.rfind("affine(", 0) == 0 && s.back() == ')') {
        std::string body = s.substr(7, s.size() - 8);
        auto comma = body.find(',');
        try {
            if (comma != std::string::npos)
                return jumps::affine_jump(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1)));
        } catch (const std::exception&) {
        }
    }
    cfg.fail("h", "must be x, 1 or affine(slope, offset), got '" + s + "'");
}

} // namespace

std::vector<std::string> model_names()
{
    std::vector<std::string> out;
    for (const auto& e : catalog())
        out.push_back(e.name);
    return out;
}

levy::LevyMeasure build_measure(const ConfigFile& m)
{
    std::string family = m.text("family");
    if (family == "tempered_stable") {
        levy::TemperedStableParams p;
        p.alpha = m.number("alpha");
        p.c_plus = m.number_or("c_plus", 1.0);
        p.c_minus = m.number_or("c_minus", 1.0);
        p.lambda_plus = m.number_or("lambda_plus", 1.0);
        p.lambda_minus = m.number_or("lambda_minus", 1.0);
        p.y_max = m.number_or("y_max", levy::kInf);
        if (!(p.alpha >= 0.0 && p.alpha < 2.0))
            m.fail("alpha", "must lie in [0, 2)");
        if (p.c_plus < 0 || p.c_minus < 0 || p.c_plus + p.c_minus == 0)
            m.fail("c_plus", "and c_minus must be >= 0 and not both zero");
        if (p.lambda_plus < 0 || p.lambda_minus < 0)
            m.fail("lambda_plus", "and lambda_minus must be >= 0");
        if (!(p.y_max > 0))
            m.fail("y_max", "must be positive");
        m.check_all_used();
        return levy::LevyMeasure::one_dimensional(std::make_shared<levy::TemperedStable>(p));
    }
    if (family == "compound_poisson") {
        double intensity = m.number("intensity");
        if (!(intensity > 0))
            m.fail("intensity", "must be positive");
        std::vector<levy::JumpAtom> atoms;
        double total = 0.0;
        for (const auto& row : m.number_table("jumps")) {
            if (row.size() != 2)
                m.fail("jumps", "rows must be [size, probability]");
            if (row[0] == 0.0 || !(row[1] > 0))
                m.fail("jumps", "sizes must be nonzero and probabilities positive");
            atoms.push_back({row[0], row[1]});
            total += row[1];
        }
        if (std::abs(total - 1.0) > 1e-12)
            m.fail("jumps", "probabilities must sum to 1");
        m.check_all_used();
        return levy::LevyMeasure::one_dimensional(std::make_shared<levy::CompoundPoisson>(intensity, std::move(atoms)));
    }
    m.fail("family", "must be tempered_stable or compound_poisson, got '" + family + "'");
}

schemes::SdeModel build_model(const ConfigFile& cfg)
{
    std::string name = cfg.text("model");
    auto it = std::find_if(catalog().begin(), catalog().end(), [&](const ModelEntry& e) { return e.name == name; });
    if (it == catalog().end()) {
        std::string names;
        for (const auto& n : model_names())
            names += (names.empty() ? "" : ", ") + n;
        cfg.fail("model", "must be one of " + names + ", got '" + name + "'");
    }
    schemes::SdeModel model = it->build(cfg);
    if (cfg.has("measure")) {
        levy::LevyMeasure nu = build_measure(cfg.section("measure"));
        State b = State::Zero(1);
        if (!cfg.has("levy_drift")) {
            cfg.number_or("levy_drift", 0.0);
        } else if (cfg.is_number("levy_drift")) {
            b[0] = cfg.number("levy_drift");
        } else {
            std::string mode = cfg.text("levy_drift");
            try {
                if (mode == "pure_jump")
                    b = nu.first_moment(0.0, 1.0);
                else if (mode == "martingale")
                    b = -nu.first_moment(1.0, levy::kInf);
                else
                    cfg.fail("levy_drift", "must be a number, pure_jump or martingale, got '" + mode + "'");
            } catch (const DomainError& e) {
                cfg.fail("levy_drift", "cannot be resolved: " + std::string(e.what()));
            }
        }
        model.h = parse_h(cfg);
        model.triplet = levy::LevyTriplet{b, nu};
    } else {
        if (it->needs_measure)
            cfg.fail("measure", "is required by model " + name);
        for (const char* k : {"levy_drift", "h"})
            if (cfg.has(k))
                cfg.fail(k, "needs a measure");
    }
    model.validate();
    return model;
}

std::string ExperimentConfig::describe() const
{
    std::ostringstream s;
    s << "model: " << model_name;
    if (model.has_jumps())
        s << " with jumps " << model.triplet.measure.describe() << ", levy drift " << model.triplet.drift[0]
          << ", h = " << model.h.name;
    s << "\n";
    for (const auto& sc : schemes) {
        s << "  scheme = " << schemes::to_string(sc.kind) << ", flow = " << sc.flow.to_string()
          << ", noise = " << flows::to_string(sc.noise);
        if (model.has_jumps())
            s << ", jump_approx = " << sc.jump.to_string();
        s << "\n";
        if (sc.kind != schemes::SchemeKind::euler_maruyama)
            s << "    operator form: " << algebra::to_string(schemes::build_scheme_expr(sc.kind, model.brownian_dim()))
              << "\n";
    }
    s << "functions:";
    for (const auto& f : functions)
        s << " " << f.name;
    s << "\nx0 = " << (x0.size() ? x0[0] : 0.0);
    if (!n_list.empty()) {
        s << ", T = " << T << ", n_list =";
        for (int n : n_list)
            s << " " << n;
        s << "\nevaluation: " << (evaluation == Evaluation::monte_carlo ? "monte_carlo" : "propagation");
        if (evaluation == Evaluation::monte_carlo)
            s << ", paths = " << estimate.paths << ", seed = " << estimate.seed << ", threads = " << estimate.threads
              << ", batch_size = " << estimate.batch_size;
        s << "\nreference: " << (reference.allow_fine_grid ? "analytic, fine grid fallback" : "analytic");
    }
    if (romberg > 0)
        s << "\nromberg: m = " << romberg;
    if (!eps_list.empty()) {
        s << "\neps_list:";
        for (double e : eps_list)
            s << " " << e;
    }
    s << "\nout_dir: " << out_dir.string() << "\n";
    return s.str();
}

ExperimentConfig load_experiment(const ConfigFile& cfg, Purpose purpose)
{
    ExperimentConfig ex;
    ex.model_name = cfg.text("model");
    ex.model = build_model(cfg);

    const bool needs_scheme = purpose != Purpose::defect_scan;
    if (needs_scheme || cfg.has("scheme") || cfg.has("schemes")) {
        std::vector<std::string> names;
        if (cfg.has("scheme") && cfg.has("schemes"))
            cfg.fail("schemes", "cannot be combined with scheme");
        if (cfg.has("schemes"))
            names = cfg.text_list("schemes");
        else
            names.push_back(cfg.text("scheme"));
        schemes::SchemeConfig base;
        try {
            base.flow = flows::FlowMethod::parse(cfg.text_or("flow", "exact"));
        } catch (const Error& e) {
            cfg.fail("flow", e.what());
        }
        try {
            base.noise = flows::parse_noise_kind(cfg.text_or("noise", "gaussian"));
        } catch (const Error& e) {
            cfg.fail("noise", e.what());
        }
        try {
            base.jump = jumps::JumpApprox::parse(cfg.text_or("jump_approx", "ignore(power)"));
        } catch (const Error& e) {
            cfg.fail("jump_approx", e.what());
        }
        if (cfg.has("eps")) {
            try {
                base.jump.eps_rule = levy::EpsRule::parse(cfg.text("eps"));
            } catch (const Error& e) {
                cfg.fail("eps", e.what());
            }
        }
        base.jump.small_l.r = cfg.number_or("localization", base.jump.small_l.r);
        base.jump.tail_l.r = cfg.number_or("tail_localization", base.jump.tail_l.r);
        if (base.jump.small_l.r < 0 || base.jump.tail_l.r < 0)
            cfg.fail("localization", "exponents must be >= 0");
        base.jump.ar_substeps = static_cast<int>(cfg.integer_or("ar_substeps", base.jump.ar_substeps));
        if (base.jump.ar_substeps < 1)
            cfg.fail("ar_substeps", "must be >= 1");
        std::string prob = cfg.text_or("one_jump_probability", "exact");
        if (prob != "exact" && prob != "asymptotic")
            cfg.fail("one_jump_probability", "must be exact or asymptotic");
        base.jump.asymptotic_probability = prob == "asymptotic";
        for (const auto& name : names) {
            schemes::SchemeConfig sc = base;
            try {
                sc.kind = schemes::parse_scheme_kind(name);
            } catch (const Error& e) {
                cfg.fail(cfg.has("schemes") ? "schemes" : "scheme", e.what());
            }
            sc.validate(ex.model);
            ex.schemes.push_back(sc);
        }
    }

    for (const auto& f : cfg.text_list("functions")) {
        try {
            ex.functions.push_back(montecarlo::parse_test_function(f));
        } catch (const Error& e) {
            cfg.fail("functions", e.what());
        }
    }

    ex.x0 = State::Constant(1, cfg.number_or("x0", 1.0));
    if (purpose == Purpose::defect_scan) {
        ex.eps_list = cfg.has("eps_list") ? cfg.number_list("eps_list") : std::vector<double>{1e-1, 1e-2, 1e-3};
        for (double e : ex.eps_list)
            if (!(e > 0 && e <= 1))
                cfg.fail("eps_list", "entries must lie in (0, 1]");
    } else if (cfg.has("eps_list")) {
        cfg.number_list("eps_list");
    }

    const bool needs_run = purpose != Purpose::defect_scan;
    if (needs_run) {
        ex.T = cfg.number("T");
        if (!(ex.T > 0))
            cfg.fail("T", "must be positive");
        for (long long n : cfg.integer_list("n_list")) {
            if (n < 1 || n > 1'000'000)
                cfg.fail("n_list", "entries must lie in [1, 1000000]");
            ex.n_list.push_back(static_cast<int>(n));
        }
        std::string evaluation = cfg.text_or("evaluation", "monte_carlo");
        if (evaluation == "propagation")
            ex.evaluation = ExperimentConfig::Evaluation::propagation;
        else if (evaluation != "monte_carlo")
            cfg.fail("evaluation", "must be monte_carlo or propagation");
        if (ex.evaluation == ExperimentConfig::Evaluation::monte_carlo) {
            long long paths = cfg.integer("paths");
            if (paths < 1 || paths > 1'000'000'000)
                cfg.fail("paths", "must lie in [1, 1e9]");
            ex.estimate.paths = static_cast<int>(paths);
        } else {
            cfg.integer_or("paths", 0);
            for (const auto& f : ex.functions)
                if (!f.polynomial)
                    cfg.fail("functions", "must be polynomials for propagation, got " + f.name);
        }
        std::string reference = cfg.text_or("reference", "analytic");
        if (reference == "fine_grid")
            ex.reference.allow_fine_grid = true;
        else if (reference != "analytic")
            cfg.fail("reference", "must be analytic or fine_grid");
        if (!ex.reference.allow_fine_grid || ex.evaluation == ExperimentConfig::Evaluation::propagation)
            for (const auto& f : ex.functions)
                if (!montecarlo::analytic_reference(ex.model, f, ex.T, ex.x0))
                    cfg.fail("reference", "has no closed form or quadrature for f = " + f.name + " on model " +
                                              ex.model_name + "; use reference: fine_grid with monte_carlo");
        ex.romberg = static_cast<int>(cfg.integer_or("romberg", 0));
        if (ex.romberg < 0)
            cfg.fail("romberg", "must be >= 0");
    } else {
        for (const char* k : {"T", "n_list", "paths", "evaluation", "reference", "romberg"})
            if (cfg.has(k))
                cfg.text_list(k);
        ex.T = 1.0;
    }

    std::int64_t seed = cfg.integer_or("seed", 1);
    if (seed < 0)
        cfg.fail("seed", "must be >= 0");
    ex.estimate.seed = static_cast<std::uint64_t>(seed);
    ex.estimate.threads = static_cast<int>(cfg.integer_or("threads", 1));
    if (ex.estimate.threads < 1 || ex.estimate.threads > 1024)
        cfg.fail("threads", "must lie in [1, 1024]");
    ex.estimate.batch_size = static_cast<int>(cfg.integer_or("batch_size", 4096));
    if (ex.estimate.batch_size < 1)
        cfg.fail("batch_size", "must be >= 1");
    ex.out_dir = cfg.text_or("out_dir", "results");
    cfg.check_all_used();

    // Resolve every jump stepper once so cutoff and measure errors surface now.
    for (const auto& sc : ex.schemes) {
        schemes::SchemeRunner runner(ex.model, sc);
        for (int n : ex.n_list)
            runner.prepare(ex.T / n);
    }
    return ex;
}

ExperimentConfig load_experiment_file(const std::filesystem::path& path, Purpose purpose)
{
    return load_experiment(ConfigFile::load(path), purpose);
}

} // namespace opsplit::cli
