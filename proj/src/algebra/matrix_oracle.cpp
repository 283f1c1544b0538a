#include "opsplit/algebra/matrix_oracle.hpp"

#include <array>

#include "opsplit/algebra/expand.hpp"
#include "opsplit/common/errors.hpp"

namespace opsplit::algebra {

namespace {

using Mat = std::array<Rational, 9>;

Mat zero()
{
    Mat m;
    m.fill(Rational(0));
    return m;
}

Mat eye()
{
    Mat m = zero();
    m[0] = m[4] = m[8] = 1;
    return m;
}

Mat mul(const Mat& a, const Mat& b)
{
    Mat c = zero();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            if (a[3 * i + k] == 0)
                continue;
            for (int j = 0; j < 3; ++j)
                c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
        }
    return c;
}

void axpy(Mat& y, const Rational& a, const Mat& x)
{
    for (int i = 0; i < 9; ++i)
        y[i] += a * x[i];
}

// Monomial coefficients of the polynomial through (i, values[i]), i = 0..n-1.
std::vector<Rational> interpolate(std::vector<Rational> dd)
{
    const std::size_t n = dd.size();
    // Newton divided differences on nodes 0, 1, ..., n-1.
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(j));
    // Horner-style conversion from Newton to monomial basis.
    std::vector<Rational> coeffs(n, Rational(0));
    for (std::size_t jj = n; jj-- > 0;) {
        // coeffs <- coeffs * (x - jj) + dd[jj]
        for (std::size_t k = n - 1; k > 0; --k)
            coeffs[k] = coeffs[k - 1] - Rational(static_cast<long>(jj)) * coeffs[k];
        coeffs[0] = -Rational(static_cast<long>(jj)) * coeffs[0];
        coeffs[0] += dd[jj];
    }
    return coeffs;
}

// exp(c tau X) truncated at degree m, evaluated at integer tau.
Mat truncated_exp(const Mat& x, const Rational& scale, int m)
{
    Mat result = eye();
    Mat power = eye();
    for (int k = 1; k <= m; ++k) {
        power = mul(power, x);
        for (auto& e : power)
            e *= scale / k;
        axpy(result, Rational(1), power);
    }
    return result;
}

// Coefficient matrices of degrees 0..m of the scheme polynomial in t.
std::vector<Mat> scheme_coefficients(const SchemeExpr& expr, const std::vector<Mat>& gens, int m)
{
    std::vector<Mat> out(m + 1, zero());
    for (const auto& term : expr.terms()) {
        const int degree = m * static_cast<int>(term.factors.size());
        std::vector<Mat> samples;
        samples.reserve(degree + 1);
        for (int tau = 0; tau <= degree; ++tau) {
            Mat value = eye();
            for (const auto& f : term.factors) {
                Mat x = zero();
                for (int g : f.generators)
                    axpy(x, Rational(1), gens[g]);
                value = mul(value, truncated_exp(x, f.fraction * tau, m));
            }
            samples.push_back(value);
        }
        for (int e = 0; e < 9; ++e) {
            std::vector<Rational> ys(samples.size());
            for (std::size_t i = 0; i < samples.size(); ++i)
                ys[i] = samples[i][e];
            auto coeffs = interpolate(std::move(ys));
            for (int k = 0; k <= m; ++k)
                out[k][e] += term.weight * coeffs[k];
        }
    }
    return out;
}

} // namespace

OracleVerdict matrix_oracle_check(const SchemeExpr& expr, int d, int m, int trials, Rng& rng)
{
    if (trials < 1)
        throw DomainError("matrix oracle needs at least one trial");
    const int g = generator_count(d);
    expr.validate(g);
    const Series scheme = expand(expr, d, m);
    const bool symbolic = !first_mismatch(scheme, target_series(d, m)).has_value();

    bool holds = true;
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Mat> gens(g);
        Mat total = zero();
        for (auto& a : gens) {
            for (auto& e : a)
                e = entry(rng.engine());
            axpy(total, Rational(1), a);
        }
        const auto coeffs = scheme_coefficients(expr, gens, m);
        Mat power = eye();
        for (int k = 0; k <= m; ++k) {
            if (k > 0)
                power = mul(power, total);
            Mat expected = power;
            for (auto& e : expected)
                e /= factorial(k);
            if (coeffs[k] != expected) {
                holds = false;
                break;
            }
        }
        if (!holds)
            break;
    }
    return {holds, symbolic, holds == symbolic};
}

} // namespace opsplit::algebra
