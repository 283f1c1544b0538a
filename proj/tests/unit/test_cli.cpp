#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "opsplit/cli/commands.hpp"
#include "opsplit/common/errors.hpp"

using namespace opsplit;
using namespace opsplit::cli;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_args(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("opsplit_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& text)
{
    auto p = dir / "config.yaml";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kGbmPropagation = R"(model: gbm
mu: 0.05
sigma: 0.2
scheme: nv_b
flow: rk(5)
noise: three_point
functions: [x^2]
T: 1
x0: 1
n_list: [2, 4, 8, 16]
evaluation: propagation
)";

const char* kSmallMc = R"(model: jump_linear
mu: 0.05
sigma: 0.2
measure:
  family: tempered_stable
  alpha: 0.5
levy_drift: 0.1
scheme: nv_b
jump_approx: ar(power)
functions: [x, x^2]
T: 1
x0: 1
n_list: [2, 4]
paths: 3000
batch_size: 500
seed: 5
)";

ExperimentConfig load(const std::string& text, Purpose purpose = Purpose::run)
{
    return load_experiment(ConfigFile::parse(text), purpose);
}

std::string config_error(const std::string& text, Purpose purpose = Purpose::run)
{
    try {
        load(text, purpose);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(VerifyAlgebra, NvBDefectAtDegreeThree)
{
    auto r = run_args({"verify-algebra", "--scheme", "nv_b", "--d", "2", "--max-order", "3"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("order 2, defect at degree 3: word (L1 L0 L0)"), std::string::npos) << r.out;
}

TEST(VerifyAlgebra, ForwardProductExpressionHasOrderOne)
{
    auto r = run_args({"verify-algebra", "--expr", "1*exp(1,0) exp(1,1)", "--d", "0"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("order 1, defect at degree 2: word (L1 L0)"), std::string::npos) << r.out;
}

TEST(VerifyAlgebra, EmptySchemeListIsUsageError)
{
    auto r = run_args({"verify-algebra"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("--scheme"), std::string::npos);
}

TEST(VerifyAlgebra, ParseErrorShowsLocation)
{
    auto r = run_args({"verify-algebra", "--expr", "1*exp(1,0) exp(1,x)", "--d", "0"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("offset 17"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("                 ^"), std::string::npos) << r.err;
}

TEST(VerifyAlgebra, GeneratorOutOfRangeIsRejected)
{
    auto r = run_args({"verify-algebra", "--expr", "1*exp(1,0) exp(1,3)", "--d", "0"});
    EXPECT_EQ(r.code, kExitUsage);
}

TEST(VerifyAlgebra, AllBuiltinsMeetDocumentedOrderAndOracleAgrees)
{
    for (const char* d : {"1", "2"}) {
        auto r = run_args({"verify-algebra", "--scheme", "all", "--d", d, "--oracle-trials", "2"});
        EXPECT_EQ(r.code, kExitOk) << r.out;
        EXPECT_EQ(r.out.find("MISSES"), std::string::npos);
        EXPECT_EQ(r.out.find("DISAGREES"), std::string::npos);
        EXPECT_NE(r.out.find("fujiwara4 (d=" + std::string(d) + "): order 4"), std::string::npos) << r.out;
    }
}

TEST(VerifyAlgebra, MaxOrderBelowDocumentedIsNotAMiss)
{
    auto r = run_args({"verify-algebra", "--scheme", "fujiwara4", "--max-order", "2"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("order 2, no defect through degree 2"), std::string::npos) << r.out;
}

TEST(Config, MissingRequiredKeyIsNamed)
{
    std::string text = kGbmPropagation;
    text.replace(text.find("T: 1\n"), 5, "");
    EXPECT_NE(config_error(text).find("key 'T' is required"), std::string::npos);
    std::string mc = kSmallMc;
    mc.replace(mc.find("paths: 3000\n"), 12, "");
    EXPECT_NE(config_error(mc).find("key 'paths' is required"), std::string::npos);
}

TEST(Config, UnknownKeyIsNamed)
{
    EXPECT_NE(config_error(std::string(kGbmPropagation) + "pathz: 10\n").find("unknown key 'pathz'"),
              std::string::npos);
    std::string nested = kSmallMc;
    nested.replace(nested.find("  alpha: 0.5\n"), 13, "  alpha: 0.5\n  beta: 1\n");
    EXPECT_NE(config_error(nested).find("unknown key 'measure.beta'"), std::string::npos);
}

TEST(Config, ModelSpecificKeysAreChecked)
{
    EXPECT_NE(config_error(std::string(kGbmPropagation) + "theta: 1\n").find("unknown key 'theta'"), std::string::npos);
    std::string bad = kGbmPropagation;
    bad.replace(bad.find("model: gbm"), 10, "model: heston");
    EXPECT_NE(config_error(bad).find("key 'model' must be one of"), std::string::npos);
}

TEST(Config, CrossFieldConstraintsAreEnforced)
{
    std::string fuji = kGbmPropagation;
    fuji.replace(fuji.find("scheme: nv_b"), 12, "scheme: fujiwara4");
    EXPECT_NE(config_error(fuji).find("flow"), std::string::npos);

    std::string cp = kSmallMc;
    cp.replace(cp.find("ar(power)"), 9, "cp_truncate(2)");
    EXPECT_NE(config_error(cp).find("cp_truncate needs a finite-activity measure"), std::string::npos);

    std::string one = kSmallMc;
    one.replace(one.find("scheme: nv_b"), 12, "scheme: one_jump_first_order");
    EXPECT_NE(config_error(one).find("decomposed(one_jump"), std::string::npos);

    std::string dec = kSmallMc;
    dec.replace(dec.find("alpha: 0.5"), 10, "alpha: 1.5");
    dec.replace(dec.find("ar(power)"), 9, "decomposed(one_jump)");
    EXPECT_FALSE(config_error(dec).empty());

    std::string prop = kGbmPropagation;
    prop.replace(prop.find("[x^2]"), 5, "[cos]");
    EXPECT_NE(config_error(prop).find("polynomials"), std::string::npos);

    std::string neg = kGbmPropagation;
    neg.replace(neg.find("T: 1"), 4, "T: -1");
    EXPECT_NE(config_error(neg).find("key 'T' must be positive"), std::string::npos);
}

TEST(Config, NoReferenceWithoutFineGridIsRejected)
{
    const char* text = R"(model: sin_drift
scheme: nv_b
flow: rk(5)
functions: [cos]
T: 1
n_list: [1, 2, 4]
paths: 100
)";
    EXPECT_NE(config_error(text).find("reference: fine_grid"), std::string::npos);
    EXPECT_NO_THROW(load(std::string(text) + "reference: fine_grid\n"));
}

TEST(Config, MeasureAndDriftResolve)
{
    const char* text = R"(model: jump_linear
measure:
  family: compound_poisson
  intensity: 2
  jumps: [[0.1, 0.5], [-0.2, 0.5]]
levy_drift: pure_jump
h: affine(1, 0)
scheme: splitting
jump_approx: cp_truncate(inf)
functions: [x]
T: 1
n_list: [2, 4, 8]
evaluation: propagation
)";
    auto ex = load(text);
    EXPECT_NEAR(ex.model.triplet.drift[0], 2 * (0.5 * 0.1 - 0.5 * 0.2), 1e-15);
    EXPECT_TRUE(ex.model.has_jumps());
    std::string bad = text;
    bad.replace(bad.find("[-0.2, 0.5]"), 11, "[-0.2, 0.6]");
    EXPECT_NE(config_error(bad).find("sum to 1"), std::string::npos);
}

TEST(Run, DryRunPrintsPlanWithoutWriting)
{
    auto dir = temp_dir("dry");
    auto cfg = write_config(dir, std::string(kGbmPropagation) + "out_dir: " + (dir / "out").string() + "\n");
    auto r = run_args({"run", cfg.string(), "--dry-run"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("scheme = nv_b, flow = rk(5), noise = three_point"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("dry run"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(dir / "out"));
}

TEST(Run, MissingKeyExitsWithUsageCode)
{
    auto dir = temp_dir("missing");
    std::string text = kGbmPropagation;
    text.replace(text.find("n_list"), 6, "n_lst");
    auto r = run_args({"run", write_config(dir, text).string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("'n_list'"), std::string::npos) << r.err;
}

TEST(Run, GbmPropagationFitsOrderTwo)
{
    auto dir = temp_dir("gbm");
    auto cfg = write_config(dir, kGbmPropagation);
    auto r = run_args({"run", cfg.string(), "--out-dir", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto ex = load(kGbmPropagation);
    std::ostringstream log;
    auto reports = compute_reports(ex, log);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].fit.status, montecarlo::FitResult::Status::ok);
    EXPECT_NEAR(reports[0].fit.slope, 2.0, 0.05);
    std::string csv = slurp(dir / "run_x_2.csv");
    EXPECT_EQ(csv.rfind("scheme,n,paths,estimate,stderr,reference,error,seed\n", 0), 0u);
    EXPECT_TRUE(std::filesystem::exists(dir / "run_x_2.gp"));
}

TEST(Run, SeedDeterminesOutputBytes)
{
    auto dir = temp_dir("seed");
    auto cfg = write_config(dir, kSmallMc);
    std::vector<std::string> csvs;
    for (const char* threads : {"1", "3", "1"}) {
        auto out = dir / ("t" + std::string(threads) + "_" + std::to_string(csvs.size()));
        auto r = run_args({"run", cfg.string(), "--threads", threads, "--out-dir", out.string()});
        ASSERT_EQ(r.code, kExitOk) << r.err;
        csvs.push_back(slurp(out / "run_x_2.csv"));
    }
    EXPECT_EQ(csvs[0], csvs[1]);
    EXPECT_EQ(csvs[0], csvs[2]);
    auto other = dir / "other";
    ASSERT_EQ(run_args({"run", cfg.string(), "--seed", "6", "--out-dir", other.string()}).code, kExitOk);
    EXPECT_NE(csvs[0], slurp(other / "run_x_2.csv"));
}

TEST(Run, RombergCancelsLeadingTerm)
{
    montecarlo::WeakErrorReport r;
    r.scheme = "s";
    r.reference.value = 1.0;
    for (int n : {1, 2, 4, 8}) {
        montecarlo::WeakErrorRow row;
        row.n = n;
        row.estimate = 1.0 + 0.5 / n + 0.25 / (double(n) * n);
        row.error = row.estimate - 1.0;
        r.rows.push_back(row);
    }
    auto c = romberg_report(r, 1);
    ASSERT_EQ(c.rows.size(), 3u);
    EXPECT_EQ(c.scheme, "s+romberg1");
    for (const auto& row : c.rows)
        EXPECT_NEAR(row.error, -0.5 / (double(row.n) * row.n), 1e-14);
    EXPECT_NEAR(c.fit.slope, 2.0, 1e-9);
}

TEST(Convergence, TablePrintsEverySchemeAndFunction)
{
    std::string text = kGbmPropagation;
    text.replace(text.find("scheme: nv_b"), 12, "schemes: [nv_a, nv_b, splitting]");
    text.replace(text.find("[x^2]"), 5, "[x, x^2]");
    auto dir = temp_dir("conv");
    auto r = run_args({"convergence", write_config(dir, text).string(), "--out-dir", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* s : {"nv_a", "nv_b", "splitting", "f=x", "f=x^2"})
        EXPECT_NE(r.out.find(s), std::string::npos) << s;
    EXPECT_TRUE(std::filesystem::exists(dir / "convergence_x.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "convergence_x_2.csv"));
}

TEST(DefectScan, TemperedStableExponents)
{
    const char* text = R"(model: jump_linear
measure:
  family: tempered_stable
  alpha: 0.5
  c_plus: 1
  c_minus: 0.5
  lambda_plus: 1
  lambda_minus: 2
h: x
functions: [x^3]
x0: 1
)";
    auto dir = temp_dir("defect");
    auto r = run_args({"defect-scan", write_config(dir, text).string(), "--out-dir", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto grab = [&](const std::string& label) {
        auto p = r.out.find(label + " exponent: ");
        return std::stod(r.out.substr(p + label.size() + 11));
    };
    EXPECT_NEAR(grab("ignore"), 1.5, 0.05);
    EXPECT_NEAR(grab("ar"), 2.5, 0.05);
    EXPECT_EQ(slurp(dir / "defect_scan.csv").rfind("function,eps,ignore_defect,ar_defect\n", 0), 0u);
}

TEST(DefectScan, ZeroMeasureGivesZeroDefects)
{
    auto dir = temp_dir("defect0");
    auto r = run_args({"defect-scan", write_config(dir, "model: gbm\nmu: 0\nsigma: 0.1\nfunctions: [x^3]\n").string(),
                  "--out-dir", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream csv(slurp(dir / "defect_scan.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        EXPECT_NE(line.find(",0,0"), std::string::npos) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(DefectScan, DegreeSevenIsUnsupported)
{
    auto dir = temp_dir("defect7");
    auto r = run_args({"defect-scan",
                  write_config(dir, "model: jump_linear\nmeasure: {family: tempered_stable, alpha: 0.5}\n"
                                    "functions: [x^7]\n")
                      .string(),
                  "--out-dir", dir.string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("degree <= 6"), std::string::npos) << r.err;
}

TEST(Docs, EveryExampleConfigValidates)
{
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(OPSPLIT_SOURCE_DIR "/docs/configs")) {
        if (entry.path().extension() != ".yaml")
            continue;
        ++seen;
        auto r = run_args({entry.path().filename() == "defect_scan.yaml" ? "defect-scan" : "run", entry.path().string(),
                      "--dry-run"});
        EXPECT_EQ(r.code, kExitOk) << entry.path() << "\n" << r.err;
    }
    EXPECT_GE(seen, 5);
}
