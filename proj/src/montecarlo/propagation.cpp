#include "opsplit/montecarlo/propagation.hpp"

#include <cmath>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "opsplit/common/errors.hpp"
#include "opsplit/montecarlo/gauss_hermite.hpp"

namespace opsplit::montecarlo {

namespace {

using jumps::JumpApprox;
using schemes::SchemeKind;

double binom(int n, int k)
{
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

double gaussian_moment(int j)
{
    if (j % 2)
        return 0.0;
    double m = 1.0;
    for (int k = j - 1; k > 1; k -= 2)
        m *= k;
    return m;
}

/// E[g(W)] for W the configured noise over time tau.
template <class G>
double noise_expectation(flows::NoiseKind kind, double tau, G&& g)
{
    double v = 0.0;
    if (kind == flows::NoiseKind::three_point) {
        for (const auto& atom : flows::three_point_atoms())
            v += static_cast<double>(atom.probability) * g(std::sqrt(tau) * static_cast<double>(atom.value));
        return v;
    }
    const auto& gh = gauss_hermite();
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
        v += gh.weights[i] * g(std::sqrt(tau) * gh.nodes[i]);
    return v;
}

void require_linear(const flows::VectorFieldSpec& v, const char* what)
{
    const auto c = flows::affine_coefficients(v);
    if (!c || (*c)[1] != 0.0)
        throw UnsupportedError(std::string("deterministic propagation needs a linear ") + what);
}

double factor(const flows::FlowMethod& flow, const flows::VectorFieldSpec& v, double t)
{
    return flow.apply(v, t, scalar_state(1.0))[0];
}

/// E[(1 + a y / l(y))^p] l(y) integrated over a < |y| <= b of the 1-d measure, as sum of power integrals.
double localized_binomial_integral(const levy::Measure1D& nu, double slope, int p, double r, double a, double b)
{
    double v = 0.0;
    for (int j = 0; j <= p; ++j) {
        const double coef = binom(p, j) * std::pow(slope, j);
        if (coef == 0.0)
            continue;
        v += coef * nu.power_integral(j - r * j + r, a, b, j % 2 == 1);
    }
    return v;
}

/// E[(prod over a Poisson(mass * tau) count of (1 + a Y))^p] = exp(tau (int (1+ay)^p - 1) nu).
double poisson_factor(const levy::Measure1D& nu, double slope, int p, double eps, double tau)
{
    const double mass = nu.power_integral(0.0, eps, levy::kInf);
    if (mass <= 0.0)
        return 1.0;
    return std::exp(tau * (localized_binomial_integral(nu, slope, p, 0.0, eps, levy::kInf) - mass));
}

double jump_factor(const schemes::SchemeRunner& runner, const jumps::JumpStepper& js, int p)
{
    const auto& model = runner.model();
    const auto& h = model.h;
    if (!h.affine || h.affine->offset != 0.0)
        throw UnsupportedError("deterministic propagation needs h(x) = a x");
    if (model.driver_dim() != 1)
        throw UnsupportedError("deterministic propagation needs a one-dimensional driver");
    const double a = h.affine->slope;
    const double tau = js.step_size();
    const auto& nu = model.triplet.measure.component(0);
    const auto& flow = js.flow();
    const auto& approx = js.approx();
    switch (approx.kind) {
    case JumpApprox::Kind::cp_truncate: {
        const auto* cp = dynamic_cast<const levy::CompoundPoisson*>(&nu);
        if (!cp)
            throw UnsupportedError("cp_truncate propagation needs an atomic compound Poisson measure");
        double g = 0.0;
        for (const auto& atom : cp->atoms())
            g += atom.probability * std::pow(1.0 + a * atom.size, p);
        const double mean = cp->intensity() * tau;
        if (approx.max_jumps == jumps::kAllJumps)
            return std::exp(mean * (g - 1.0));
        const int M = approx.max_jumps;
        const boost::math::poisson_distribution<double> pois(mean > 0 ? mean : 1e-300);
        double v = 0.0, below = 0.0;
        for (int k = 0; k < M; ++k) {
            const double pk = mean > 0 ? boost::math::pdf(pois, k) : (k == 0 ? 1.0 : 0.0);
            v += pk * std::pow(g, k);
            below += pk;
        }
        return v + std::max(0.0, 1.0 - below) * std::pow(g, M);
    }
    case JumpApprox::Kind::ignore: {
        if (flow.kind != flows::FlowMethod::Kind::exact)
            throw UnsupportedError("ignore propagation needs exact drift flows (jump times are random)");
        const double drift = std::pow(factor(flow, js.cutoff().drift_field, tau), p);
        return drift * poisson_factor(nu, a, p, js.eps(), tau);
    }
    case JumpApprox::Kind::ar: {
        const auto& ar = js.ar();
        if (ar.gaussian_fields.empty()) {
            if (flow.kind != flows::FlowMethod::Kind::exact)
                throw UnsupportedError("ignore propagation needs exact drift flows (jump times are random)");
            return std::pow(factor(flow, ar.cutoff.drift_field, tau), p) * poisson_factor(nu, a, p, js.eps(), tau);
        }
        const double s = tau / ar.substeps;
        const double d = std::pow(factor(flow, ar.drift_field, 0.5 * s), 2 * p);
        double g = 1.0;
        for (const auto& u : ar.gaussian_fields)
            g *= noise_expectation(runner.config().noise, s, [&](double w) { return std::pow(factor(flow, u, w), p); });
        const double j = poisson_factor(nu, a, p, js.eps(), s);
        return std::pow(d * g * j, ar.substeps);
    }
    case JumpApprox::Kind::decomposed: {
        const double r1 = std::pow(factor(flow, js.cutoff().drift_field, tau), p);
        const auto& sj = js.small_jumps();
        double r2 = 1.0;
        if (sj.lambda_eps > 0.0) {
            r2 = 0.0;
            for (int j = 0; j <= p; j += 2) {
                const double q = j + sj.l.r - sj.l.r * j / 2.0;
                r2 += binom(p, j) * std::pow(a, j) * gaussian_moment(j) * std::pow(tau * sj.lambda_eps, j / 2.0) /
                      sj.lambda_eps * nu.power_integral(q, 0.0, sj.eps);
            }
        }
        const auto& b = js.tail_jumps().bernoulli;
        double r3 = 1.0;
        if (b.tail_mass > 0.0) {
            const double g = localized_binomial_integral(nu, a, p, b.l.r, js.eps(), levy::kInf) / b.tail_mass;
            r3 = b.mode == jumps::BernoulliMode::one_jump
                     ? (1 - b.p1) + b.p1 * g
                     : (1 - b.p1) + b.p1 * (1 - b.p2) * g + b.p1 * b.p2 * g * g;
        }
        return r1 * r2 * r3;
    }
    }
    return 1.0;
}

double em_moment(const schemes::SchemeRunner& runner, double t, int p)
{
    const auto& model = runner.model();
    if (model.has_jumps())
        throw UnsupportedError("deterministic propagation of euler_maruyama supports diffusion models only");
    if (model.brownian_dim() > 1)
        throw UnsupportedError("deterministic propagation of euler_maruyama supports one Brownian driver");
    const double k = model.ito_drift.is_zero() ? 0.0 : (*flows::affine_coefficients(model.ito_drift))[0];
    const double s = model.diffusion.empty() ? 0.0 : (*flows::affine_coefficients(model.diffusion[0]))[0];
    return noise_expectation(runner.config().noise, t, [&](double w) { return std::pow(1.0 + k * t + s * w, p); });
}

} // namespace

double step_moment(const schemes::SchemeRunner& runner, const schemes::StepContext& ctx, int p, int component)
{
    const auto& model = runner.model();
    if (model.state_dim != 1)
        throw UnsupportedError("deterministic propagation needs a scalar model");
    require_linear(runner.strat_drift(), "drift");
    for (const auto& v : model.diffusion)
        require_linear(v, "diffusion field");
    if (p < 0 || p > 12)
        throw UnsupportedError("deterministic propagation supports powers 0..12");
    if (p == 0)
        return 1.0;
    const auto& cfg = runner.config();
    const auto& plan = runner.plan();
    if (cfg.kind == SchemeKind::euler_maruyama)
        return em_moment(runner, ctx.t, p);
    const bool euler = cfg.kind == SchemeKind::one_jump_first_order;
    const int d = plan.d;
    const auto& comp = plan.components.at(static_cast<std::size_t>(component));
    double total = 0.0;
    for (const auto& br : comp.branches) {
        double m = 1.0;
        for (const auto& s : br.steps) {
            const double c = static_cast<double>(s.fraction);
            const double tau = c * ctx.t;
            if (s.generator == 0) {
                const auto& v = runner.strat_drift();
                const double r = euler ? 1.0 + tau * v(scalar_state(1.0))[0] : factor(cfg.flow, v, tau);
                m *= std::pow(r, p);
            } else if (s.generator <= d) {
                const auto& v = model.diffusion[static_cast<std::size_t>(s.generator - 1)];
                m *= noise_expectation(cfg.noise, tau, [&](double w) {
                    const double r = euler ? flows::euler_brownian_map(v, w, tau, scalar_state(1.0))[0]
                                           : factor(cfg.flow, v, w);
                    return std::pow(r, p);
                });
            } else if (model.has_jumps()) {
                m *= jump_factor(runner, *ctx.stepper(c), p);
            }
        }
        total += static_cast<double>(br.weight) * m;
    }
    return total;
}

double deterministic_linear_propagation(const schemes::SchemeRunner& runner, int p, double T, int n, double x0)
{
    if (n < 1)
        throw DomainError("propagation: n must be at least 1");
    if (p == 0)
        return 1.0;
    const auto ctx = runner.prepare(T / n);
    double v = 0.0;
    for (int c = 0; c < runner.component_count(); ++c)
        v += runner.component_weight(c) * std::pow(step_moment(runner, ctx, p, c), n);
    return std::pow(x0, p) * v;
}

double deterministic_linear_propagation(const schemes::SchemeRunner& runner, const TestFunction& f, double T, int n,
                                        double x0)
{
    if (!f.polynomial)
        throw UnsupportedError("deterministic propagation needs a polynomial test function, got " + f.name);
    double v = 0.0;
    for (std::size_t k = 0; k < f.polynomial->size(); ++k)
        if ((*f.polynomial)[k] != 0.0)
            v += (*f.polynomial)[k] * deterministic_linear_propagation(runner, static_cast<int>(k), T, n, x0);
    return v;
}

} // namespace opsplit::montecarlo
