#pragma once

#include <vector>

#include "opsplit/levy/measure.hpp"

namespace opsplit::levy {

inline constexpr std::size_t kDefaultMaxRejections = 1'000'000;

/// Exact sampler for the density proportional to y^q e^{-lambda y} on (a, b].
/// The range is cut into cells of width at most 1/lambda; a cell is chosen by
/// mass, a point is drawn from y^q on it by inverse CDF and accepted with
/// probability e^{-lambda (y - lo)}. The far tail uses a shifted-exponential
/// proposal. Throws SamplerFailure after max_rejections rejections in one draw.
class PowerExpSampler {
public:
    PowerExpSampler(double q, double lambda, double a, double b, std::size_t max_rejections = kDefaultMaxRejections);

    double mass() const { return total_; }
    double sample(Rng& rng) const;

private:
    struct Cell {
        double lo;
        double hi;
        bool tail;
    };

    double sample_cell(const Cell& cell, Rng& rng) const;
    double power_inverse(double lo, double hi, double u) const;

    double q_;
    double lambda_;
    std::size_t max_rejections_;
    std::vector<Cell> cells_;
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

/// Sampler for the law proportional to l(y) nu(dy) on a < |y| <= b, over all
/// components of a d-dimensional measure. Build once per step size and reuse.
class RegionSampler {
public:
    RegionSampler() = default;
    RegionSampler(const LevyMeasure& nu, double a, double b, const Localization& l,
                  std::size_t max_rejections = kDefaultMaxRejections);

    /// Normalizing mass int_{a<|y|<=b} l(y) nu(dy).
    double mass() const { return total_; }
    bool empty() const { return total_ <= 0.0; }

    /// Jump vector (nonzero in one coordinate).
    State sample(Rng& rng) const;

private:
    int dimension_ = 1;
    std::vector<std::unique_ptr<Sampler1D>> parts_;
    std::vector<double> cumulative_;
    std::vector<int> index_;
    double total_ = 0.0;
};

/// One draw from G_{eps,l} = C^{-1} l 1_{|y|>eps} nu.
State sample_tail(const LevyMeasure& nu, double eps, const Localization& l, Rng& rng);

/// One draw from F_eps^l = lambda_eps^{-1} l 1_{|y|<=eps} nu.
State sample_small_localized(const LevyMeasure& nu, double eps, const Localization& l, Rng& rng);

} // namespace opsplit::levy
