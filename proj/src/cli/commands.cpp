#include "opsplit/cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "opsplit/algebra/expand.hpp"
#include "opsplit/algebra/matrix_oracle.hpp"
#include "opsplit/common/errors.hpp"
#include "opsplit/jumps/defect.hpp"
#include "opsplit/montecarlo/propagation.hpp"
#include "opsplit/montecarlo/report_io.hpp"
#include "opsplit/schemes/build_expr.hpp"

namespace opsplit::cli {

namespace {

using montecarlo::WeakErrorReport;

const std::vector<schemes::SchemeKind> kBuiltins = {
    schemes::SchemeKind::nv_a,      schemes::SchemeKind::nv_b,
    schemes::SchemeKind::splitting, schemes::SchemeKind::nv_extrapolated,
    schemes::SchemeKind::fujiwara4, schemes::SchemeKind::one_jump_first_order,
};

std::string file_stem(const std::string& prefix, const std::string& function)
{
    std::string s = prefix + "_";
    for (char c : function) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
            s += c;
        else if (!s.empty() && s.back() != '_')
            s += '_';
    }
    while (s.back() == '_')
        s.pop_back();
    return s;
}

std::string order_line(const std::string& label, const algebra::SchemeExpr& expr, int d, int max_order,
                       algebra::OrderResult& result)
{
    result = algebra::order_of(expr, d, max_order);
    std::ostringstream s;
    s << label << " (d=" << d << "): order " << result.order;
    if (result.first_defect) {
        const auto& def = *result.first_defect;
        s << ", defect at degree " << def.degree << ": word " << algebra::to_string(def.word)
          << " scheme coefficient " << def.scheme_coefficient << " target " << def.target_coefficient;
    } else {
        s << ", no defect through degree " << max_order;
    }
    return s.str();
}

/// Matrix oracle at degrees order and order + 1 (when within max_order).
bool oracle_agrees(const algebra::SchemeExpr& expr, int d, int order, int max_order, int trials, std::uint64_t seed,
                   std::ostream& out)
{
    Rng rng(derive_seed(seed, {0x6f7261636c65ULL}));
    bool all = true;
    for (int m = std::max(order, 1); m <= std::min(order + 1, max_order); ++m) {
        auto v = algebra::matrix_oracle_check(expr, d, m, trials, rng);
        out << "  oracle degree " << m << " (" << trials << " trials): identity " << (v.identity_holds ? "holds" : "fails")
            << ", symbolic " << (v.symbolic_match ? "match" : "mismatch") << ", " << (v.agrees ? "agrees" : "DISAGREES")
            << "\n";
        all = all && v.agrees;
    }
    return all;
}

void print_rows(const WeakErrorReport& r, std::ostream& out)
{
    out << "  " << std::setw(6) << "n" << std::setw(12) << "paths" << std::setw(20) << "estimate" << std::setw(14)
        << "stderr" << std::setw(14) << "error" << "\n";
    for (const auto& row : r.rows) {
        out << "  " << std::setw(6) << row.n << std::setw(12) << row.paths << std::setw(20) << std::setprecision(12)
            << row.estimate << std::setw(14) << std::setprecision(4) << row.stderr_ << std::setw(14) << row.error
            << "\n";
    }
}

montecarlo::FitResult fit_rows(const std::vector<montecarlo::WeakErrorRow>& rows)
{
    if (rows.size() < 3) {
        montecarlo::FitResult f;
        f.note = "fewer than 3 step counts";
        return f;
    }
    std::vector<int> n;
    std::vector<double> e, se;
    for (const auto& r : rows) {
        n.push_back(r.n);
        e.push_back(r.error);
        se.push_back(r.stderr_);
    }
    return montecarlo::fit_order(n, e, se);
}

std::vector<WeakErrorReport> with_romberg(std::vector<WeakErrorReport> reports, int m)
{
    if (m <= 0)
        return reports;
    std::vector<WeakErrorReport> out;
    for (auto& r : reports) {
        auto combined = romberg_report(r, m);
        out.push_back(std::move(r));
        out.push_back(std::move(combined));
    }
    return out;
}

/// Writes one CSV and plot script per test function holding every scheme.
void write_by_function(const ExperimentConfig& ex, const std::string& prefix,
                       const std::vector<WeakErrorReport>& reports, std::ostream& out)
{
    for (const auto& f : ex.functions) {
        std::vector<WeakErrorReport> group;
        for (const auto& r : reports)
            if (r.function == f.name)
                group.push_back(r);
        auto path = montecarlo::write_report_files(ex.out_dir, file_stem(prefix, f.name), group);
        out << "wrote " << path.string() << "\n";
    }
}

/// Least-squares slope of log|y| on log x over the nonzero entries; NaN when fewer than 2.
double log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] == 0.0)
            continue;
        double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    if (k < 2)
        return std::nan("");
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace

int cmd_verify_algebra(const VerifyAlgebraOptions& opts, std::ostream& out, std::ostream& err)
{
    if (opts.schemes.empty() && opts.exprs.empty()) {
        err << "verify-algebra: give at least one --scheme or --expr\n";
        return kExitUsage;
    }
    if (opts.d < 0) {
        err << "verify-algebra: --d must be >= 0\n";
        return kExitUsage;
    }
    std::vector<schemes::SchemeKind> kinds;
    for (const auto& name : opts.schemes) {
        if (name == "all") {
            kinds.insert(kinds.end(), kBuiltins.begin(), kBuiltins.end());
            continue;
        }
        try {
            kinds.push_back(schemes::parse_scheme_kind(name));
        } catch (const Error& e) {
            err << "verify-algebra: " << e.what() << "\n";
            return kExitUsage;
        }
        if (kinds.back() == schemes::SchemeKind::euler_maruyama) {
            err << "verify-algebra: euler_maruyama is not a composition of coordinate flows\n";
            return kExitUsage;
        }
    }
    int status = kExitOk;
    for (auto kind : kinds) {
        const int documented = schemes::documented_order(kind);
        const int max_order = opts.max_order > 0 ? opts.max_order : documented + 1;
        auto expr = schemes::build_scheme_expr(kind, opts.d);
        algebra::OrderResult r;
        out << order_line(schemes::to_string(kind), expr, opts.d, max_order, r) << "\n";
        if (r.order < std::min(documented, max_order)) {
            out << "  MISSES documented order " << documented << "\n";
            status = kExitFailure;
        }
        if (opts.oracle_trials > 0 && !oracle_agrees(expr, opts.d, r.order, max_order, opts.oracle_trials, opts.seed, out))
            status = kExitFailure;
    }
    for (const auto& text : opts.exprs) {
        algebra::SchemeExpr expr;
        try {
            expr = algebra::parse_scheme_expr(text);
            expr.validate(algebra::generator_count(opts.d));
        } catch (const ParseError& e) {
            err << "verify-algebra: " << e.what() << "\n  " << text << "\n  " << std::string(e.position(), ' ') << "^\n";
            return kExitUsage;
        } catch (const Error& e) {
            err << "verify-algebra: " << e.what() << "\n";
            return kExitUsage;
        }
        const int max_order = opts.max_order > 0 ? opts.max_order : 3;
        algebra::OrderResult r;
        out << order_line("\"" + text + "\"", expr, opts.d, max_order, r) << "\n";
        if (opts.oracle_trials > 0 && !oracle_agrees(expr, opts.d, r.order, max_order, opts.oracle_trials, opts.seed, out))
            status = kExitFailure;
    }
    return status;
}

WeakErrorReport romberg_report(const WeakErrorReport& r, int m)
{
    WeakErrorReport c = r;
    c.scheme = r.scheme + "+romberg" + std::to_string(m);
    c.rows.clear();
    const double w = std::ldexp(1.0, m);
    for (const auto& coarse : r.rows) {
        for (const auto& fine : r.rows) {
            if (fine.n != 2 * coarse.n)
                continue;
            montecarlo::WeakErrorRow row = fine;
            row.paths = coarse.paths + fine.paths;
            row.estimate = montecarlo::romberg_combine(coarse.estimate, fine.estimate, m);
            row.error = row.estimate - r.reference.value;
            row.stderr_ = std::hypot(w * fine.stderr_, coarse.stderr_) / (w - 1.0);
            row.stderr_ = std::hypot(row.stderr_, r.reference.stderr_);
            row.aborted = coarse.aborted + fine.aborted;
            c.rows.push_back(row);
        }
    }
    c.fit = fit_rows(c.rows);
    return c;
}

std::vector<WeakErrorReport> compute_reports(const ExperimentConfig& ex, std::ostream& log)
{
    std::vector<WeakErrorReport> reports;
    for (const auto& sc : ex.schemes) {
        schemes::SchemeRunner runner(ex.model, sc);
        log << "computing " << schemes::to_string(sc.kind) << "\n";
        if (ex.evaluation == ExperimentConfig::Evaluation::monte_carlo) {
            auto rs = montecarlo::estimate(runner, ex.functions, ex.T, ex.x0, ex.n_list, ex.estimate, ex.reference);
            reports.insert(reports.end(), rs.begin(), rs.end());
            continue;
        }
        for (const auto& f : ex.functions) {
            WeakErrorReport r;
            r.scheme = schemes::to_string(sc.kind);
            r.function = f.name;
            r.T = ex.T;
            r.seed = ex.estimate.seed;
            auto ref = montecarlo::analytic_reference(ex.model, f, ex.T, ex.x0);
            if (!ref)
                throw ConfigError("reference: no closed form for f = " + f.name);
            r.reference = *ref;
            for (int n : ex.n_list) {
                montecarlo::WeakErrorRow row;
                row.n = n;
                row.estimate = montecarlo::deterministic_linear_propagation(runner, f, ex.T, n, ex.x0[0]);
                row.reference = r.reference.value;
                row.error = row.estimate - r.reference.value;
                r.rows.push_back(row);
            }
            r.fit = fit_rows(r.rows);
            reports.push_back(std::move(r));
        }
    }
    return with_romberg(std::move(reports), ex.romberg);
}

int cmd_run(const ExperimentConfig& ex, bool dry_run, std::ostream& out)
{
    out << ex.describe();
    if (dry_run) {
        out << "dry run: configuration valid, nothing computed\n";
        return kExitOk;
    }
    auto reports = compute_reports(ex, out);
    for (const auto& r : reports) {
        out << montecarlo::summarize_fit(r) << "\n";
        print_rows(r, out);
    }
    write_by_function(ex, "run", reports, out);
    return kExitOk;
}

int cmd_convergence(const ExperimentConfig& ex, bool dry_run, std::ostream& out)
{
    out << ex.describe();
    if (dry_run) {
        out << "dry run: configuration valid, nothing computed\n";
        return kExitOk;
    }
    auto reports = compute_reports(ex, out);
    std::size_t width = 8;
    for (const auto& r : reports)
        width = std::max(width, r.scheme.size() + 2);
    out << std::left << std::setw(static_cast<int>(width)) << "scheme";
    for (const auto& f : ex.functions)
        out << std::setw(24) << ("f=" + f.name);
    out << "\n";
    for (std::size_t i = 0; i < reports.size(); i += ex.functions.size()) {
        out << std::setw(static_cast<int>(width)) << reports[i].scheme;
        for (std::size_t j = 0; j < ex.functions.size(); ++j) {
            const auto& fit = reports[i + j].fit;
            std::ostringstream cell;
            if (fit.status == montecarlo::FitResult::Status::ok)
                cell << std::setprecision(3) << std::fixed << fit.slope << " +- " << fit.ci_half_width;
            else
                cell << "indeterminate";
            out << std::setw(24) << cell.str();
        }
        out << "\n";
    }
    out << std::right;
    write_by_function(ex, "convergence", reports, out);
    return kExitOk;
}

int cmd_defect_scan(const ExperimentConfig& ex, bool dry_run, std::ostream& out)
{
    if (ex.model.state_dim != 1 || ex.model.driver_dim() != 1 || !ex.model.h.affine)
        throw ConfigError("model: defect-scan needs a one-dimensional model with affine h");
    for (const auto& f : ex.functions)
        if (!f.polynomial || f.polynomial->size() > 7)
            throw ConfigError("functions: defect-scan supports polynomials of degree <= 6, got " + f.name);
    out << ex.describe();
    if (dry_run) {
        out << "dry run: configuration valid, nothing computed\n";
        return kExitOk;
    }
    std::filesystem::create_directories(ex.out_dir);
    auto path = ex.out_dir / "defect_scan.csv";
    std::ofstream csv(path);
    if (!csv)
        throw Error("cannot write " + path.string());
    csv << "function,eps,ignore_defect,ar_defect\n" << std::setprecision(17);
    for (const auto& f : ex.functions) {
        std::vector<double> ig, ar;
        out << "f=" << f.name << " at x0=" << ex.x0[0] << "\n  " << std::setw(12) << "eps" << std::setw(18)
            << "ignore defect" << std::setw(18) << "ar defect" << "\n";
        for (double eps : ex.eps_list) {
            double di = jumps::per_step_defect(ex.model.triplet.measure, ex.model.h, *f.polynomial, ex.x0[0], eps,
                                               jumps::DefectVariant::ignore);
            double da = jumps::per_step_defect(ex.model.triplet.measure, ex.model.h, *f.polynomial, ex.x0[0], eps,
                                               jumps::DefectVariant::ar);
            ig.push_back(di);
            ar.push_back(da);
            csv << f.name << "," << eps << "," << di << "," << da << "\n";
            out << "  " << std::setprecision(6) << std::setw(12) << eps << std::setw(18) << di << std::setw(18) << da
                << "\n";
        }
        auto show = [&](const char* label, const std::vector<double>& d) {
            double s = log_slope(ex.eps_list, d);
            out << "  " << label << " exponent: ";
            if (std::isnan(s))
                out << "n/a (defects vanish)\n";
            else
                out << std::setprecision(4) << s << "\n";
        };
        show("ignore", ig);
        show("ar", ar);
    }
    out << "wrote " << path.string() << "\n";
    return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Operator-splitting weak approximation of jump SDEs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "opsplit 1.0");

    long long seed = -1;
    int threads = 0;
    std::string out_dir;
    bool dry_run = false;
    app.add_option("--seed", seed, "Override the config seed")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "Override the worker count")->check(CLI::Range(1, 1024));
    app.add_option("--out-dir", out_dir, "Override the output directory");
    app.add_flag("--dry-run", dry_run, "Validate and print the resolved plan only");

    VerifyAlgebraOptions va;
    auto* verify = app.add_subcommand(
        "verify-algebra",
        "Measure the formal order of built-in schemes or of expressions such as\n"
        "  \"1/2 * exp(1/2,0) exp(1,1) exp(1/2,0) + 1/2 * exp(1,1) exp(1,0)\"\n"
        "(weight '*' product of exp(fraction, generator); generator 0 is the drift,\n"
        "1..d the Brownian fields, d+1 the jump part).");
    verify->add_option("--scheme", va.schemes, "Built-in scheme name, or all (repeatable)");
    verify->add_option("--expr", va.exprs, "Scheme expression (repeatable)");
    verify->add_option("--d", va.d, "Brownian dimension");
    verify->add_option("--max-order", va.max_order, "Highest degree checked (default documented order + 1)");
    verify->add_option("--oracle-trials", va.oracle_trials, "Random matrix trials for the identity oracle");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one or more schemes on a config and fit the weak order");
    auto* conv = app.add_subcommand("convergence", "Compare fitted orders of several schemes in one table");
    auto* scan = app.add_subcommand("defect-scan", "Tabulate per-step generator defects against eps");
    for (auto* sub : {run, conv, scan})
        sub->add_option("config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
    for (auto* sub : {verify, run, conv, scan})
        sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) {
            if (seed >= 0)
                va.seed = static_cast<std::uint64_t>(seed);
            return cmd_verify_algebra(va, out, err);
        }
        Purpose purpose = scan->parsed() ? Purpose::defect_scan : conv->parsed() ? Purpose::convergence : Purpose::run;
        ExperimentConfig ex = load_experiment_file(config_path, purpose);
        if (seed >= 0)
            ex.estimate.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0)
            ex.estimate.threads = threads;
        if (!out_dir.empty())
            ex.out_dir = out_dir;
        if (scan->parsed())
            return cmd_defect_scan(ex, dry_run, out);
        if (conv->parsed())
            return cmd_convergence(ex, dry_run, out);
        return cmd_run(ex, dry_run, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int run_cli(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace opsplit::cli
