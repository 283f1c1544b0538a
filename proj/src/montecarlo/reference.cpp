#include "opsplit/montecarlo/reference.hpp"

#include <cmath>

#include <boost/math/special_functions/binomial.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "opsplit/common/errors.hpp"
#include "opsplit/montecarlo/gauss_hermite.hpp"

namespace opsplit::montecarlo {

namespace {

double binom(int n, int k)
{
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
}

} // namespace

const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::quadrature: return "quadrature";
    case Provenance::fine_grid: return "fine_grid";
    }
    return "?";
}

std::optional<std::vector<double>> affine_moments(const schemes::SdeModel& model, int p, double T, double x0)
{
    if (model.state_dim != 1 || p < 0)
        return std::nullopt;
    const auto drift = flows::affine_coefficients(model.ito_drift);
    if (!drift)
        return std::nullopt;
    std::vector<std::array<double, 2>> diff;
    for (const auto& v : model.diffusion) {
        const auto c = flows::affine_coefficients(v);
        if (!c)
            return std::nullopt;
        diff.push_back(*c);
    }
    double K = (*drift)[0], M = (*drift)[1];
    double a = 0.0, c = 0.0;
    // mu[j]: int y^j nu over R for j >= 2, over |y| > 1 for j = 1
    std::vector<double> mu(static_cast<std::size_t>(p) + 1, 0.0);
    if (model.has_jumps()) {
        if (model.driver_dim() != 1 || !model.h.affine)
            return std::nullopt;
        a = model.h.affine->slope;
        c = model.h.affine->offset;
        const double b = model.triplet.drift[0];
        K += a * b;
        M += c * b;
        if (!model.triplet.measure.is_zero()) {
            const auto& nu = model.triplet.measure.component(0);
            try {
                for (int j = 1; j <= p; ++j)
                    mu[static_cast<std::size_t>(j)] = nu.power_integral(j, j == 1 ? 1.0 : 0.0, levy::kInf, j % 2 == 1);
            } catch (const DomainError&) {
                return std::nullopt;
            }
            for (double v : mu)
                if (!std::isfinite(v))
                    return std::nullopt;
        }
    }
    const int n = p + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k <= p; ++k) {
        A(k, k) += k * K;
        A(k, k - 1) += k * M;
        for (const auto& [s, r] : diff) {
            const double half = 0.5 * k * (k - 1);
            A(k, k) += half * s * s;
            if (k >= 1)
                A(k, k - 1) += half * 2 * s * r;
            if (k >= 2)
                A(k, k - 2) += half * r * r;
        }
        for (int j = 1; j <= k; ++j) {
            const double mj = mu[static_cast<std::size_t>(j)];
            if (mj == 0.0)
                continue;
            // C(k,j) x^{k-j} (a x + c)^j mu_j
            for (int i = 0; i <= j; ++i) {
                const double coef = binom(k, j) * binom(j, i) * std::pow(a, i) * std::pow(c, j - i) * mj;
                if (coef != 0.0)
                    A(k, k - j + i) += coef;
            }
        }
    }
    Eigen::VectorXd m0(n);
    for (int q = 0; q < n; ++q)
        m0[q] = std::pow(x0, q);
    const Eigen::VectorXd m = (T * A).exp() * m0;
    return std::vector<double>(m.data(), m.data() + n);
}

std::optional<ReferenceValue> analytic_reference(const schemes::SdeModel& model, const TestFunction& f, double T,
                                                 const State& x0)
{
    if (f.polynomial && f.degree == 0)
        return ReferenceValue{(*f.polynomial)[0], 0.0, Provenance::closed_form, "constant function"};
    if (x0.size() != model.state_dim)
        throw ConfigError("x0 has dimension " + std::to_string(x0.size()) + ", model has " +
                          std::to_string(model.state_dim));
    if (f.polynomial && f.degree <= 12) {
        if (const auto m = affine_moments(model, f.degree, T, x0[0])) {
            double v = 0.0;
            for (std::size_t k = 0; k < f.polynomial->size(); ++k)
                v += (*f.polynomial)[k] * (*m)[k];
            return ReferenceValue{v, 0.0, Provenance::closed_form, "affine moment system"};
        }
    }
    // Geometric Brownian motion without jumps: lognormal terminal law.
    if (model.state_dim == 1 && !model.has_jumps() && model.ito_drift.linear_matrix) {
        double var = 0.0;
        for (const auto& v : model.diffusion) {
            if (!v.linear_matrix)
                return std::nullopt;
            var += std::pow((*v.linear_matrix)(0, 0), 2);
        }
        const double mu = (*model.ito_drift.linear_matrix)(0, 0);
        const auto& gh = gauss_hermite();
        double v = 0.0;
        for (std::size_t i = 0; i < gh.nodes.size(); ++i)
            v += gh.weights[i] *
                 f(scalar_state(x0[0] * std::exp((mu - 0.5 * var) * T + std::sqrt(var * T) * gh.nodes[i])));
        return ReferenceValue{v, 0.0, Provenance::quadrature, "Gauss-Hermite lognormal quadrature"};
    }
    return std::nullopt;
}

} // namespace opsplit::montecarlo
