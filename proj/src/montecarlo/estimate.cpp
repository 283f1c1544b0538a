#include "opsplit/montecarlo/estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "opsplit/common/errors.hpp"

namespace opsplit::montecarlo {

namespace {

double pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

struct BatchResult {
    // per function: sum of (f - shift) and of its square
    std::vector<double> sum, sum2;
    int ok = 0;
    int aborted = 0;
    std::string first_failure;
};

struct ComponentStats {
    std::vector<double> mean, var;
    int ok = 0;
    int aborted = 0;
    std::string first_failure;
};

ComponentStats run_component(const schemes::SchemeRunner& runner, const schemes::StepContext& ctx,
                             const std::vector<TestFunction>& fs, int n, int component, const State& x0,
                             const EstimateOptions& opts)
{
    const std::size_t nf = fs.size();
    const int paths = opts.paths;
    auto path_seed = [&](int i) {
        return derive_seed(opts.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(component),
                                       static_cast<std::uint64_t>(i)});
    };
    // Shift every value by f(path 0) so constant outputs are reproduced exactly.
    std::vector<double> shift(nf, 0.0);
    {
        Rng rng(path_seed(0));
        const auto p = runner.simulate_path(ctx, n, x0, rng, component);
        if (!p.aborted)
            for (std::size_t k = 0; k < nf; ++k)
                shift[k] = fs[k](p.x);
    }
    const int batch = std::max(1, opts.batch_size);
    const int batches = (paths + batch - 1) / batch;
    std::vector<BatchResult> results(static_cast<std::size_t>(batches));
    std::atomic<int> next{0};
    auto worker = [&]() {
        std::vector<std::vector<double>> vals(nf), sq(nf);
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= batches)
                return;
            const int lo = b * batch, hi = std::min(paths, lo + batch);
            for (std::size_t k = 0; k < nf; ++k) {
                vals[k].clear();
                sq[k].clear();
            }
            BatchResult& r = results[static_cast<std::size_t>(b)];
            for (int i = lo; i < hi; ++i) {
                Rng rng(path_seed(i));
                const auto p = runner.simulate_path(ctx, n, x0, rng, component);
                if (p.aborted) {
                    if (r.aborted++ == 0)
                        r.first_failure = p.reason;
                    continue;
                }
                ++r.ok;
                for (std::size_t k = 0; k < nf; ++k) {
                    const double v = fs[k](p.x) - shift[k];
                    vals[k].push_back(v);
                    sq[k].push_back(v * v);
                }
            }
            r.sum.resize(nf);
            r.sum2.resize(nf);
            for (std::size_t k = 0; k < nf; ++k) {
                r.sum[k] = pairwise_sum(vals[k]);
                r.sum2[k] = pairwise_sum(sq[k]);
            }
        }
    };
    const int threads = std::clamp(opts.threads, 1, std::max(1, batches));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    ComponentStats s;
    s.mean.assign(nf, 0.0);
    s.var.assign(nf, 0.0);
    std::vector<double> sums(results.size()), sums2(results.size());
    for (const auto& r : results) {
        s.ok += r.ok;
        s.aborted += r.aborted;
        if (s.first_failure.empty())
            s.first_failure = r.first_failure;
    }
    if (s.ok == 0)
        return s;
    for (std::size_t k = 0; k < nf; ++k) {
        for (std::size_t b = 0; b < results.size(); ++b) {
            sums[b] = results[b].sum.empty() ? 0.0 : results[b].sum[k];
            sums2[b] = results[b].sum2.empty() ? 0.0 : results[b].sum2[k];
        }
        const double m = pairwise_sum(sums) / s.ok;
        const double m2 = pairwise_sum(sums2) / s.ok;
        s.mean[k] = shift[k] + m;
        s.var[k] = s.ok > 1 ? std::max(0.0, (m2 - m * m) * s.ok / (s.ok - 1)) : 0.0;
    }
    return s;
}

} // namespace

std::vector<std::vector<PointEstimate>> estimate_points(const schemes::SchemeRunner& runner,
                                                        const std::vector<TestFunction>& fs, double T,
                                                        const State& x0, const std::vector<int>& n_list,
                                                        const EstimateOptions& opts)
{
    if (opts.paths < 1)
        throw ConfigError("paths must be at least 1");
    if (!(T > 0.0))
        throw ConfigError("T must be positive");
    for (std::size_t i = 0; i < n_list.size(); ++i)
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1]))
            throw ConfigError("n_list must be strictly increasing positive integers");
    std::vector<std::vector<PointEstimate>> out(fs.size());
    for (int n : n_list) {
        const auto ctx = runner.prepare(T / n);
        std::vector<double> est(fs.size(), 0.0), var(fs.size(), 0.0);
        int aborted = 0, worst_ok = opts.paths;
        std::string failure;
        for (int c = 0; c < runner.component_count(); ++c) {
            const double xi = runner.component_weight(c);
            const auto s = run_component(runner, ctx, fs, n, c, x0, opts);
            aborted += s.aborted;
            worst_ok = std::min(worst_ok, s.ok);
            if (failure.empty())
                failure = s.first_failure;
            if (s.ok == 0)
                throw NumericalFailure("every path aborted at n = " + std::to_string(n) + ": " + failure, x0);
            for (std::size_t k = 0; k < fs.size(); ++k) {
                est[k] += xi * s.mean[k];
                var[k] += xi * xi * s.var[k] / s.ok;
            }
        }
        const double total = static_cast<double>(opts.paths) * runner.component_count();
        if (aborted > opts.max_abort_rate * total) {
            std::ostringstream msg;
            msg << aborted << " of " << total << " paths aborted at n = " << n << " (limit "
                << opts.max_abort_rate * 100 << "%): " << failure;
            throw NumericalFailure(msg.str(), x0);
        }
        for (std::size_t k = 0; k < fs.size(); ++k)
            out[k].push_back(PointEstimate{n, worst_ok, est[k], std::sqrt(var[k]), aborted});
    }
    return out;
}

ReferenceValue reference_value(const schemes::SdeModel& model, const schemes::SchemeConfig& cfg,
                               const TestFunction& f, double T, const State& x0, const std::vector<int>& n_list,
                               const EstimateOptions& opts, const ReferenceOptions& ref_opts)
{
    if (auto r = analytic_reference(model, f, T, x0))
        return *r;
    if (!ref_opts.allow_fine_grid)
        throw ConfigError("no closed-form or quadrature reference for model '" + model.name + "' and f = " + f.name +
                          "; enable the fine-grid fallback (reference = fine_grid)");
    const int n_max = n_list.empty() ? 1 : *std::max_element(n_list.begin(), n_list.end());
    const int n_ref = ref_opts.fine_grid_factor_n * n_max;
    schemes::SchemeConfig em = cfg;
    em.kind = schemes::SchemeKind::euler_maruyama;
    if (em.jump.kind == jumps::JumpApprox::Kind::decomposed)
        em.jump = jumps::JumpApprox::parse("ar(power)");
    const schemes::SchemeRunner runner(model, em);
    EstimateOptions o = opts;
    o.paths = opts.paths * ref_opts.fine_grid_factor_paths;
    o.seed = derive_seed(opts.seed, {0xF1E6A1Dull});
    const auto pts = estimate_points(runner, {f}, T, x0, {n_ref}, o);
    std::ostringstream detail;
    detail << "fine_grid(n_ref=" << n_ref << ", paths=" << o.paths << ")";
    return ReferenceValue{pts[0][0].estimate, pts[0][0].stderr_, Provenance::fine_grid, detail.str()};
}

std::vector<WeakErrorReport> estimate(const schemes::SchemeRunner& runner, const std::vector<TestFunction>& fs,
                                      double T, const State& x0, const std::vector<int>& n_list,
                                      const EstimateOptions& opts, const ReferenceOptions& ref_opts)
{
    std::vector<WeakErrorReport> reports;
    for (const auto& f : fs) {
        WeakErrorReport r;
        r.scheme = schemes::to_string(runner.config().kind);
        r.function = f.name;
        r.T = T;
        r.seed = opts.seed;
        r.reference = reference_value(runner.model(), runner.config(), f, T, x0, n_list, opts, ref_opts);
        reports.push_back(std::move(r));
    }
    const auto pts = estimate_points(runner, fs, T, x0, n_list, opts);
    for (std::size_t k = 0; k < fs.size(); ++k) {
        auto& r = reports[k];
        std::vector<int> ns;
        std::vector<double> errs, ses;
        for (const auto& p : pts[k]) {
            WeakErrorRow row;
            row.n = p.n;
            row.paths = p.paths;
            row.estimate = p.estimate;
            row.stderr_ = std::hypot(p.stderr_, r.reference.stderr_);
            row.reference = r.reference.value;
            row.error = p.estimate - r.reference.value;
            row.aborted = p.aborted;
            ns.push_back(row.n);
            errs.push_back(row.error);
            ses.push_back(row.stderr_);
            r.rows.push_back(row);
        }
        if (ns.size() >= 3)
            r.fit = fit_order(ns, errs, ses);
        else
            r.fit.note = "fewer than 3 step counts";
    }
    return reports;
}

} // namespace opsplit::montecarlo
