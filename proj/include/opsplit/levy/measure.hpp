#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "opsplit/common/rng.hpp"
#include "opsplit/common/types.hpp"

namespace opsplit::levy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Draws magnitudes-with-sign from |y|^p nu(dy) restricted to a < |y| <= b.
class Sampler1D {
public:
    virtual ~Sampler1D() = default;
    virtual double sample(Rng& rng) const = 0;
    /// Normalizing mass int_{a<|y|<=b} |y|^p nu(dy).
    virtual double mass() const = 0;
};

/// One-dimensional Levy measure.
class Measure1D {
public:
    virtual ~Measure1D() = default;

    /// int_{a<|y|<=b} |y|^p sign(y)^{signed_} nu(dy); b may be infinite.
    /// Throws DomainError when the integral diverges.
    virtual double power_integral(double p, double a, double b, bool signed_ = false) const = 0;

    virtual bool infinite_activity() const = 0;

    /// inf{p : int_{|y|<=1} |y|^p nu < inf}; -infinity for finite activity.
    virtual double activity_index() const = 0;

    virtual std::unique_ptr<Sampler1D> sampler(double p, double a, double b, std::size_t max_rejections) const = 0;

    virtual std::string describe() const = 0;
};

struct TemperedStableParams {
    double alpha = 0.5;
    double c_plus = 1.0;
    double c_minus = 1.0;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    /// Support cap |y| <= y_max; needed when a tail integral would otherwise diverge.
    double y_max = kInf;
};

/// nu(dy) = |y|^{-1-alpha} (c+ e^{-lambda+ |y|} 1_{y>0} + c- e^{-lambda- |y|} 1_{y<0}) dy.
class TemperedStable final : public Measure1D {
public:
    explicit TemperedStable(const TemperedStableParams& params);

    const TemperedStableParams& params() const { return params_; }

    double power_integral(double p, double a, double b, bool signed_ = false) const override;
    bool infinite_activity() const override { return true; }
    double activity_index() const override { return params_.alpha; }
    std::unique_ptr<Sampler1D> sampler(double p, double a, double b, std::size_t max_rejections) const override;
    std::string describe() const override;

    /// Density of nu at y != 0.
    double density(double y) const;

private:
    TemperedStableParams params_;
};

struct JumpAtom {
    double size;
    double probability;
};

/// Finite measure intensity * (law of the jump size), with an atomic jump law.
class CompoundPoisson final : public Measure1D {
public:
    CompoundPoisson(double intensity, std::vector<JumpAtom> atoms);

    double intensity() const { return intensity_; }
    const std::vector<JumpAtom>& atoms() const { return atoms_; }

    double power_integral(double p, double a, double b, bool signed_ = false) const override;
    bool infinite_activity() const override { return false; }
    double activity_index() const override { return -kInf; }
    std::unique_ptr<Sampler1D> sampler(double p, double a, double b, std::size_t max_rejections) const override;
    std::string describe() const override;

private:
    double intensity_;
    std::vector<JumpAtom> atoms_;
};

/// l(y) = |y|^r; r = 0 is l = 1.
struct Localization {
    double r = 0.0;

    double operator()(double abs_y) const { return r == 0.0 ? 1.0 : std::pow(abs_y, r); }
};

/// Levy measure on R^d with independent components: nu = sum_i nu_i on the i-th axis.
class LevyMeasure {
public:
    LevyMeasure();
    explicit LevyMeasure(std::vector<std::shared_ptr<const Measure1D>> components);

    static LevyMeasure zero(int d);
    static LevyMeasure one_dimensional(std::shared_ptr<const Measure1D> m);

    int dimension() const { return static_cast<int>(components_.size()); }
    const Measure1D& component(int i) const { return *components_[static_cast<std::size_t>(i)]; }
    bool is_zero() const;
    bool infinite_activity() const;
    double activity_index() const;

    /// sum_i int_{a<|y_i|<=b} |y_i|^p nu_i(dy).
    double integral(double p, double a, double b) const;

    /// int_{a<|y|<=b} y nu(dy), componentwise.
    State first_moment(double a, double b) const;

    std::string describe() const;

private:
    std::vector<std::shared_ptr<const Measure1D>> components_;
};

/// Drift b under the truncation tau(y) = y 1_{|y|<=1}, plus the jump measure.
struct LevyTriplet {
    State drift;
    LevyMeasure measure;

    int dimension() const { return measure.dimension(); }
};

enum class Region { small, tail };

/// int_{|y|<=eps} |y|^k nu(dy).
double small_moment(const LevyMeasure& nu, double k, double eps);

/// Sigma_eps = int_{|y|<=eps} y y^T nu(dy).
SmallMatrix sigma_matrix(const LevyMeasure& nu, double eps);

/// C_{eps,l} = int_{|y|>eps} l nu (Region::tail) or lambda_eps = int_{|y|<=eps} l nu (Region::small).
double tail_mass(const LevyMeasure& nu, double eps, const Localization& l, Region region = Region::tail);

} // namespace opsplit::levy
