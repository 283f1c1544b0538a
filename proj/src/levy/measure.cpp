#include "opsplit/levy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opsplit/common/errors.hpp"
#include "opsplit/levy/quadrature.hpp"
#include "opsplit/levy/sampler.hpp"

namespace opsplit::levy {

namespace {

class TemperedStableSampler final : public Sampler1D {
public:
    TemperedStableSampler(const TemperedStableParams& p, double power, double a, double b, std::size_t cap)
    {
        const double q = power - 1.0 - p.alpha;
        const double hi = std::min(b, p.y_max);
        if (p.c_plus > 0.0 && hi > a) {
            plus_ = std::make_unique<PowerExpSampler>(q, p.lambda_plus, a, hi, cap);
            mass_plus_ = p.c_plus * plus_->mass();
        }
        if (p.c_minus > 0.0 && hi > a) {
            minus_ = std::make_unique<PowerExpSampler>(q, p.lambda_minus, a, hi, cap);
            mass_minus_ = p.c_minus * minus_->mass();
        }
    }

    double sample(Rng& rng) const override
    {
        if (mass() <= 0.0)
            throw DomainError("tempered stable sampler: empty region");
        if (rng.uniform() * mass() < mass_plus_)
            return plus_->sample(rng);
        return -minus_->sample(rng);
    }

    double mass() const override { return mass_plus_ + mass_minus_; }

private:
    std::unique_ptr<PowerExpSampler> plus_, minus_;
    double mass_plus_ = 0.0, mass_minus_ = 0.0;
};

class AtomSampler final : public Sampler1D {
public:
    AtomSampler(double intensity, const std::vector<JumpAtom>& atoms, double p, double a, double b)
    {
        for (const auto& atom : atoms) {
            const double s = std::abs(atom.size);
            if (s > a && s <= b && atom.probability > 0.0) {
                total_ += intensity * atom.probability * std::pow(s, p);
                sizes_.push_back(atom.size);
                cumulative_.push_back(total_);
            }
        }
    }

    double sample(Rng& rng) const override
    {
        if (sizes_.empty())
            throw DomainError("compound Poisson sampler: no atoms in the requested region");
        const double u = rng.uniform() * total_;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), sizes_.size() - 1);
        return sizes_[idx];
    }

    double mass() const override { return total_; }

private:
    std::vector<double> sizes_, cumulative_;
    double total_ = 0.0;
};

} // namespace

TemperedStable::TemperedStable(const TemperedStableParams& p) : params_(p)
{
    if (!(p.alpha >= 0.0 && p.alpha < 2.0))
        throw DomainError("tempered stable: alpha must lie in [0, 2)");
    if (p.c_plus < 0.0 || p.c_minus < 0.0 || !(p.c_plus + p.c_minus > 0.0))
        throw DomainError("tempered stable: c_plus, c_minus must be nonnegative with at least one positive");
    if (p.lambda_plus < 0.0 || p.lambda_minus < 0.0)
        throw DomainError("tempered stable: lambda_plus, lambda_minus must be nonnegative");
    if (!(p.y_max > 0.0))
        throw DomainError("tempered stable: y_max must be positive");
    if (p.alpha >= 1.0 && std::isinf(p.y_max) &&
        ((p.c_plus > 0.0 && p.lambda_plus == 0.0) || (p.c_minus > 0.0 && p.lambda_minus == 0.0)))
        throw DomainError("tempered stable: alpha >= 1 needs lambda > 0 on every charged side or a finite y_max");
}

double TemperedStable::power_integral(double p, double a, double b, bool signed_) const
{
    const double hi = std::min(b, params_.y_max);
    if (!(hi > a))
        return 0.0;
    const double q = p - 1.0 - params_.alpha;
    double plus = 0.0, minus = 0.0;
    try {
        if (params_.c_plus > 0.0)
            plus = params_.c_plus * power_exp_integral(q, params_.lambda_plus, a, hi);
        if (params_.c_minus > 0.0)
            minus = params_.c_minus * power_exp_integral(q, params_.lambda_minus, a, hi);
    } catch (const DomainError& e) {
        std::ostringstream msg;
        msg << "integral of |y|^" << p << " over " << a << " < |y| <= " << b << " under " << describe()
            << " diverges: " << e.what();
        throw DomainError(msg.str());
    }
    return signed_ ? plus - minus : plus + minus;
}

std::unique_ptr<Sampler1D> TemperedStable::sampler(double p, double a, double b, std::size_t cap) const
{
    return std::make_unique<TemperedStableSampler>(params_, p, a, b, cap);
}

double TemperedStable::density(double y) const
{
    if (y == 0.0 || std::abs(y) > params_.y_max)
        return 0.0;
    const double base = std::pow(std::abs(y), -1.0 - params_.alpha);
    return y > 0 ? params_.c_plus * base * std::exp(-params_.lambda_plus * y)
                 : params_.c_minus * base * std::exp(params_.lambda_minus * y);
}

std::string TemperedStable::describe() const
{
    std::ostringstream s;
    s << "tempered_stable{alpha=" << params_.alpha << ", c_plus=" << params_.c_plus << ", c_minus=" << params_.c_minus
      << ", lambda_plus=" << params_.lambda_plus << ", lambda_minus=" << params_.lambda_minus;
    if (!std::isinf(params_.y_max))
        s << ", y_max=" << params_.y_max;
    s << "}";
    return s.str();
}

CompoundPoisson::CompoundPoisson(double intensity, std::vector<JumpAtom> atoms)
    : intensity_(intensity), atoms_(std::move(atoms))
{
    if (!(intensity_ >= 0.0) || !std::isfinite(intensity_))
        throw DomainError("compound Poisson: intensity must be finite and nonnegative");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.probability >= 0.0) || !std::isfinite(a.size))
            throw DomainError("compound Poisson: atom probabilities must be nonnegative and sizes finite");
        total += a.probability;
    }
    if (!atoms_.empty() && std::abs(total - 1.0) > 1e-12)
        throw DomainError("compound Poisson: atom probabilities sum to " + std::to_string(total) + ", expected 1");
    if (atoms_.empty() && intensity_ > 0.0)
        throw DomainError("compound Poisson: positive intensity needs a jump distribution");
}

double CompoundPoisson::power_integral(double p, double a, double b, bool signed_) const
{
    double sum = 0.0;
    for (const auto& atom : atoms_) {
        const double s = std::abs(atom.size);
        if (s > a && s <= b) {
            const double v = intensity_ * atom.probability * std::pow(s, p);
            sum += (signed_ && atom.size < 0) ? -v : v;
        }
    }
    return sum;
}

std::unique_ptr<Sampler1D> CompoundPoisson::sampler(double p, double a, double b, std::size_t) const
{
    return std::make_unique<AtomSampler>(intensity_, atoms_, p, a, b);
}

std::string CompoundPoisson::describe() const
{
    std::ostringstream s;
    s << "compound_poisson{intensity=" << intensity_ << ", atoms=[";
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        s << (i ? ", " : "") << atoms_[i].size << ":" << atoms_[i].probability;
    s << "]}";
    return s.str();
}

LevyMeasure::LevyMeasure() : LevyMeasure(zero(1)) {}

LevyMeasure::LevyMeasure(std::vector<std::shared_ptr<const Measure1D>> components) : components_(std::move(components))
{
    if (components_.empty() || static_cast<int>(components_.size()) > kMaxDim)
        throw DomainError("Levy measure: dimension must be between 1 and " + std::to_string(kMaxDim));
    for (const auto& c : components_)
        if (!c)
            throw DomainError("Levy measure: null component");
}

LevyMeasure LevyMeasure::zero(int d)
{
    std::vector<std::shared_ptr<const Measure1D>> parts;
    for (int i = 0; i < d; ++i)
        parts.push_back(std::make_shared<CompoundPoisson>(0.0, std::vector<JumpAtom>{}));
    return LevyMeasure(std::move(parts));
}

LevyMeasure LevyMeasure::one_dimensional(std::shared_ptr<const Measure1D> m)
{
    return LevyMeasure({std::move(m)});
}

bool LevyMeasure::is_zero() const
{
    for (const auto& c : components_)
        if (c->infinite_activity() || c->power_integral(0.0, 0.0, kInf) > 0.0)
            return false;
    return true;
}

bool LevyMeasure::infinite_activity() const
{
    return std::any_of(components_.begin(), components_.end(), [](const auto& c) { return c->infinite_activity(); });
}

double LevyMeasure::activity_index() const
{
    double idx = -kInf;
    for (const auto& c : components_)
        idx = std::max(idx, c->activity_index());
    return idx;
}

double LevyMeasure::integral(double p, double a, double b) const
{
    double sum = 0.0;
    for (const auto& c : components_)
        sum += c->power_integral(p, a, b);
    return sum;
}

State LevyMeasure::first_moment(double a, double b) const
{
    State m(dimension());
    for (int i = 0; i < dimension(); ++i)
        m[i] = components_[static_cast<std::size_t>(i)]->power_integral(1.0, a, b, true);
    return m;
}

std::string LevyMeasure::describe() const
{
    if (components_.size() == 1)
        return components_[0]->describe();
    std::string s = "product[";
    for (std::size_t i = 0; i < components_.size(); ++i)
        s += (i ? ", " : "") + components_[i]->describe();
    return s + "]";
}

double small_moment(const LevyMeasure& nu, double k, double eps)
{
    if (!(eps > 0.0))
        throw DomainError("small_moment: eps must be positive");
    return nu.integral(k, 0.0, eps);
}

SmallMatrix sigma_matrix(const LevyMeasure& nu, double eps)
{
    const int d = nu.dimension();
    SmallMatrix s = SmallMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        s(i, i) = nu.component(i).power_integral(2.0, 0.0, eps);
    return s;
}

double tail_mass(const LevyMeasure& nu, double eps, const Localization& l, Region region)
{
    if (!(eps > 0.0))
        throw DomainError("tail_mass: eps must be positive");
    if (region == Region::tail)
        return nu.integral(l.r, eps, kInf);
    if (l.r <= nu.activity_index())
        throw DomainError("tail_mass: lambda_eps = int_{|y|<=eps} |y|^" + std::to_string(l.r) +
                          " nu(dy) is infinite (localization exponent must exceed the activity index " +
                          std::to_string(nu.activity_index()) + ")");
    return nu.integral(l.r, 0.0, eps);
}

} // namespace opsplit::levy
