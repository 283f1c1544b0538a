#include "opsplit/flows/flows.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "opsplit/common/errors.hpp"

namespace opsplit::flows {

namespace {

void require_finite(const State& x, const char* where)
{
    if (!all_finite(x))
        throw NumericalFailure(std::string(where) + ": non-finite state", x);
}

// Polynomial in s = sin x and c = cos x.
using TrigPoly = std::map<std::pair<int, int>, double>;

TrigPoly derivative(const TrigPoly& p)
{
    TrigPoly out;
    for (const auto& [pow, coef] : p) {
        const auto [i, j] = pow;
        if (i > 0)
            out[{i - 1, j + 1}] += coef * i;
        if (j > 0)
            out[{i + 1, j - 1}] -= coef * j;
    }
    return out;
}

TrigPoly times_field(const TrigPoly& p, double a, double b)
{
    TrigPoly out;
    for (const auto& [pow, coef] : p) {
        out[{pow.first + 1, pow.second}] += a * coef;
        out[pow] += b * coef;
    }
    return out;
}

double evaluate(const TrigPoly& p, double x)
{
    const double s = std::sin(x), c = std::cos(x);
    double sum = 0.0;
    for (const auto& [pow, coef] : p)
        sum += coef * std::pow(s, pow.first) * std::pow(c, pow.second);
    return sum;
}

State fd_iterated(const VectorFieldSpec& v, int k, const State& x, double step)
{
    if (k == 0)
        return x;
    const State vx = v.eval(x);
    const double norm = vx.norm();
    if (norm == 0.0)
        return State::Zero(x.size());
    if (k == 1)
        return vx;
    const double h = step / norm;
    const State plus = x + h * vx;
    const State minus = x - h * vx;
    return (fd_iterated(v, k - 1, plus, step) - fd_iterated(v, k - 1, minus, step)) / (2.0 * h);
}

} // namespace

bool VectorFieldSpec::is_zero() const
{
    if (linear_matrix)
        return linear_matrix->isZero(0.0);
    return constant && eval(State::Zero(dimension)).isZero(0.0);
}

VectorFieldSpec zero_field(int dimension)
{
    VectorFieldSpec v = linear_field(SmallMatrix::Zero(dimension, dimension));
    v.constant = true;
    v.name = "zero";
    return v;
}

VectorFieldSpec constant_field(const State& c)
{
    VectorFieldSpec v;
    v.dimension = static_cast<int>(c.size());
    v.eval = [c](const State&) { return c; };
    v.flow = [c](double t, const State& x) { return State(x + t * c); };
    v.iterated = [c](int k, const State& x) { return k == 1 ? c : State(State::Zero(x.size())); };
    v.iterated_max = std::numeric_limits<int>::max();
    const int n = v.dimension;
    v.jacobian = [n](const State&) { return SmallMatrix(SmallMatrix::Zero(n, n)); };
    v.constant = true;
    v.name = "constant";
    return v;
}

VectorFieldSpec linear_field(const SmallMatrix& a)
{
    if (a.rows() != a.cols())
        throw ConfigError("linear field: matrix must be square");
    VectorFieldSpec v;
    v.dimension = static_cast<int>(a.rows());
    v.eval = [a](const State& x) { return State(a * x); };
    if (a.rows() == 1) {
        const double k = a(0, 0);
        v.flow = [k](double t, const State& x) { return State(x * std::exp(k * t)); };
    } else {
        v.flow = [a](double t, const State& x) {
            const Eigen::MatrixXd m = (t * Eigen::MatrixXd(a)).exp();
            return State(m * Eigen::VectorXd(x));
        };
    }
    v.iterated = [a](int k, const State& x) {
        State y = x;
        for (int i = 0; i < k; ++i)
            y = a * y;
        return y;
    };
    v.iterated_max = std::numeric_limits<int>::max();
    v.jacobian = [a](const State&) { return a; };
    v.linear_matrix = a;
    v.name = "linear";
    return v;
}

VectorFieldSpec scalar_linear_field(double a)
{
    SmallMatrix m(1, 1);
    m(0, 0) = a;
    return linear_field(m);
}

VectorFieldSpec affine_field(double k, double m)
{
    if (m == 0.0)
        return scalar_linear_field(k);
    if (k == 0.0)
        return constant_field(scalar_state(m));
    VectorFieldSpec v;
    v.dimension = 1;
    v.eval = [k, m](const State& x) { return scalar_state(k * x[0] + m); };
    // (x + m/k) e^{kt} - m/k, written to stay accurate for small kt
    v.flow = [k, m](double t, const State& x) { return scalar_state(x[0] * std::exp(k * t) + m * std::expm1(k * t) / k); };
    v.iterated = [k, m](int j, const State& x) {
        return j == 0 ? x : scalar_state(std::pow(k, j - 1) * (k * x[0] + m));
    };
    v.iterated_max = std::numeric_limits<int>::max();
    v.jacobian = [k](const State&) {
        SmallMatrix jm(1, 1);
        jm(0, 0) = k;
        return jm;
    };
    v.affine_1d = std::array<double, 2>{k, m};
    v.name = "affine";
    return v;
}

std::optional<std::array<double, 2>> affine_coefficients(const VectorFieldSpec& v)
{
    if (v.dimension != 1)
        return std::nullopt;
    if (v.affine_1d)
        return v.affine_1d;
    if (v.linear_matrix)
        return std::array<double, 2>{(*v.linear_matrix)(0, 0), 0.0};
    if (v.constant)
        return std::array<double, 2>{0.0, v.eval(State::Zero(1))[0]};
    return std::nullopt;
}

VectorFieldSpec sine_field(double a, double b)
{
    constexpr int kMax = 8;
    std::vector<TrigPoly> g(kMax + 1);
    g[1] = {{{1, 0}, a}, {{0, 0}, b}};
    for (int k = 2; k <= kMax; ++k)
        g[k] = times_field(derivative(g[k - 1]), a, b);

    VectorFieldSpec v;
    v.dimension = 1;
    v.eval = [a, b](const State& x) { return scalar_state(a * std::sin(x[0]) + b); };
    v.iterated = [g](int k, const State& x) { return k == 0 ? x : scalar_state(evaluate(g[k], x[0])); };
    v.iterated_max = kMax;
    v.jacobian = [a](const State& x) {
        SmallMatrix j(1, 1);
        j(0, 0) = a * std::cos(x[0]);
        return j;
    };
    v.name = "sine";
    return v;
}

SmallMatrix jacobian(const VectorFieldSpec& v, const State& x)
{
    if (v.jacobian)
        return v.jacobian(x);
    const int n = static_cast<int>(x.size());
    SmallMatrix j(n, n);
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    for (int l = 0; l < n; ++l) {
        const double h = base * (1.0 + std::abs(x[l]));
        State plus = x, minus = x;
        plus[l] += h;
        minus[l] -= h;
        j.col(l) = (v.eval(plus) - v.eval(minus)) / (2.0 * h);
    }
    return j;
}

State exp_map(const VectorFieldSpec& v, double t, const State& x, const ReferenceSolverOptions& opts)
{
    if (!std::isfinite(t))
        throw DomainError("exp_map: non-finite time");
    if (t == 0.0)
        return x;
    if (v.flow) {
        State y = v.flow(t, x);
        require_finite(y, "exp_map");
        return y;
    }

    namespace odeint = boost::numeric::odeint;
    using Vec = std::vector<double>;
    const std::size_t n = static_cast<std::size_t>(x.size());
    auto system = [&v, n](const Vec& y, Vec& dydt, double) {
        State s(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            s[i] = y[i];
        const State f = v.eval(s);
        for (std::size_t i = 0; i < n; ++i)
            dydt[i] = f[i];
    };
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<Vec>());

    Vec y(x.data(), x.data() + n);
    Vec last = y;
    double time = 0.0;
    double dt = t / 64.0;
    const double direction = t > 0 ? 1.0 : -1.0;
    std::size_t steps = 0;
    auto to_state = [n](const Vec& y) {
        State s(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            s[i] = y[i];
        return s;
    };
    while (direction * (t - time) > 0.0) {
        if (direction * (time + dt - t) > 0.0)
            dt = t - time;
        if (++steps > opts.max_steps)
            throw NumericalFailure("exp_map: reference solver exceeded its step budget", to_state(last));
        if (stepper.try_step(system, y, time, dt) == odeint::success) {
            for (double c : y)
                if (!std::isfinite(c))
                    throw NumericalFailure("exp_map: reference solver produced a non-finite state", to_state(last));
            last = y;
        }
        if (std::abs(dt) < 1e-14 * std::abs(t))
            throw NumericalFailure("exp_map: reference solver step size underflow", to_state(last));
    }
    return to_state(y);
}

bool taylor_uses_fallback(const VectorFieldSpec& v, int m)
{
    return !(v.iterated && v.iterated_max >= m);
}

State taylor_flow(const VectorFieldSpec& v, int m, double t, const State& x, bool allow_fallback)
{
    if (m < 1)
        throw ConfigError("taylor_flow: order must be at least 1");
    if (t == 0.0)
        return x;
    const bool fallback = taylor_uses_fallback(v, m);
    if (fallback && !allow_fallback)
        throw ConfigError("taylor_flow: field '" + v.name + "' has no closed-form derivatives up to order " +
                          std::to_string(m) + " and the finite-difference fallback is disabled");
    State y = x;
    double coef = 1.0;
    for (int k = 1; k <= m; ++k) {
        coef *= t / k;
        State g;
        if (fallback) {
            const double step = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2)) * (1.0 + x.norm());
            g = fd_iterated(v, k, x, step);
        } else {
            g = v.iterated(k, x);
        }
        y += coef * g;
    }
    require_finite(y, "taylor_flow");
    return y;
}

State rk_flow(const ButcherTableau& tab, const VectorFieldSpec& v, double t, const State& x)
{
    if (t == 0.0)
        return x;
    const int s = tab.stages();
    std::vector<State> k(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        State stage = x;
        for (int j = 0; j < i; ++j)
            if (tab.a[i][j] != 0.0)
                stage += (t * tab.a[i][j]) * k[j];
        k[i] = v.eval(stage);
    }
    State y = x;
    for (int i = 0; i < s; ++i)
        if (tab.b[i] != 0.0)
            y += (t * tab.b[i]) * k[i];
    require_finite(y, "rk_flow");
    return y;
}

VectorFieldSpec stratonovich_drift(const VectorFieldSpec& ito_drift, const std::vector<VectorFieldSpec>& diffusion)
{
    bool all_constant = true, all_linear = static_cast<bool>(ito_drift.linear_matrix);
    for (const auto& v : diffusion) {
        if (v.dimension != ito_drift.dimension)
            throw ConfigError("stratonovich_drift: diffusion field '" + v.name + "' has dimension " +
                              std::to_string(v.dimension) + ", drift has " + std::to_string(ito_drift.dimension));
        all_constant = all_constant && v.constant;
        all_linear = all_linear && v.linear_matrix;
    }
    if (all_constant)
        return ito_drift;
    if (all_linear) {
        SmallMatrix a = *ito_drift.linear_matrix;
        for (const auto& v : diffusion)
            a -= 0.5 * (*v.linear_matrix) * (*v.linear_matrix);
        VectorFieldSpec out = linear_field(a);
        out.name = "stratonovich(" + ito_drift.name + ")";
        return out;
    }
    VectorFieldSpec out;
    out.dimension = ito_drift.dimension;
    out.eval = [ito_drift, diffusion](const State& x) {
        State y = ito_drift.eval(x);
        for (const auto& v : diffusion)
            y -= 0.5 * jacobian(v, x) * v.eval(x);
        return y;
    };
    out.linear_growth = ito_drift.linear_growth;
    out.name = "stratonovich(" + ito_drift.name + ")";
    return out;
}

State euler_brownian_map(const VectorFieldSpec& v, double dB, double t, const State& x)
{
    const State vx = v.eval(x);
    State y = x + dB * vx;
    if (!v.constant)
        y += (0.5 * t) * (jacobian(v, x) * vx);
    require_finite(y, "euler_brownian_map");
    return y;
}

} // namespace opsplit::flows
