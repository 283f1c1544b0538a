#include "opsplit/levy/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "opsplit/common/errors.hpp"
#include "opsplit/levy/quadrature.hpp"

namespace opsplit::levy {

namespace {

constexpr double kCellsBeforeTail = 40.0;

} // namespace

PowerExpSampler::PowerExpSampler(double q, double lambda, double a, double b, std::size_t max_rejections)
    : q_(q), lambda_(lambda), max_rejections_(max_rejections)
{
    if (!(a >= 0.0 && b > a))
        throw DomainError("power-exponential sampler: need 0 <= a < b");
    if (lambda_ < 0.0)
        throw DomainError("power-exponential sampler: negative tempering rate");
    if (lambda_ == 0.0) {
        cells_.push_back({a, b, false});
    } else {
        const double width = 1.0 / lambda_;
        const double limit = std::min(b, a + kCellsBeforeTail * width);
        for (double lo = a; lo < limit;) {
            const double hi = std::min(limit, lo + width);
            cells_.push_back({lo, hi, false});
            lo = hi;
        }
        if (b > limit)
            cells_.push_back({limit, b, true});
    }
    for (const auto& c : cells_) {
        total_ += power_exp_integral(q_, lambda_, c.lo, c.hi);
        cumulative_.push_back(total_);
    }
}

double PowerExpSampler::power_inverse(double lo, double hi, double u) const
{
    if (q_ == -1.0)
        return lo * std::pow(hi / lo, u);
    const double e = q_ + 1.0;
    const double a = std::pow(lo, e), b = std::pow(hi, e);
    return std::pow(a + u * (b - a), 1.0 / e);
}

double PowerExpSampler::sample_cell(const Cell& cell, Rng& rng) const
{
    for (std::size_t attempt = 0; attempt < max_rejections_; ++attempt) {
        if (!cell.tail) {
            const double y = power_inverse(cell.lo, cell.hi, rng.uniform_pos());
            if (lambda_ == 0.0 || rng.uniform() < std::exp(-lambda_ * (y - cell.lo)))
                return y;
            continue;
        }
        // Shifted exponential proposal, halved rate when y^q grows.
        const double rate = q_ > 0.0 ? 0.5 * lambda_ : lambda_;
        const double span = cell.hi - cell.lo;
        const double cap = std::isinf(span) ? 1.0 : -std::expm1(-rate * span);
        const double y = cell.lo - std::log1p(-rng.uniform() * cap) / rate;
        double ratio = std::pow(y / cell.lo, q_);
        if (q_ > 0.0) {
            const double peak = std::max(cell.lo, 2.0 * q_ / lambda_);
            const double bound = std::pow(peak / cell.lo, q_) * std::exp(-0.5 * lambda_ * (peak - cell.lo));
            ratio *= std::exp(-0.5 * lambda_ * (y - cell.lo)) / bound;
        }
        if (y <= cell.hi && rng.uniform() < ratio)
            return y;
    }
    throw SamplerFailure("power-exponential sampler: " + std::to_string(max_rejections_) + " consecutive rejections");
}

double PowerExpSampler::sample(Rng& rng) const
{
    if (!(total_ > 0.0))
        throw DomainError("power-exponential sampler: zero mass");
    const double u = rng.uniform() * total_;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cells_.size() - 1);
    return sample_cell(cells_[idx], rng);
}

RegionSampler::RegionSampler(const LevyMeasure& nu, double a, double b, const Localization& l, std::size_t max_rejections)
    : dimension_(nu.dimension())
{
    for (int i = 0; i < nu.dimension(); ++i) {
        auto part = nu.component(i).sampler(l.r, a, b, max_rejections);
        if (part->mass() > 0.0) {
            total_ += part->mass();
            cumulative_.push_back(total_);
            index_.push_back(i);
            parts_.push_back(std::move(part));
        }
    }
}

State RegionSampler::sample(Rng& rng) const
{
    if (parts_.empty())
        throw DomainError("region sampler: the requested jump region carries no mass");
    std::size_t k = 0;
    if (parts_.size() > 1) {
        const double u = rng.uniform() * total_;
        k = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                                           cumulative_.begin()),
                                  parts_.size() - 1);
    }
    State y = State::Zero(dimension_);
    y[index_[k]] = parts_[k]->sample(rng);
    return y;
}

State sample_tail(const LevyMeasure& nu, double eps, const Localization& l, Rng& rng)
{
    return RegionSampler(nu, eps, kInf, l).sample(rng);
}

State sample_small_localized(const LevyMeasure& nu, double eps, const Localization& l, Rng& rng)
{
    tail_mass(nu, eps, l, Region::small);
    return RegionSampler(nu, 0.0, eps, l).sample(rng);
}

} // namespace opsplit::levy
