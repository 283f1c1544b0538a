#include "opsplit/jumps/approx.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

#include "opsplit/common/errors.hpp"

namespace opsplit::jumps {

namespace {

std::vector<std::string> split_top_level(const std::string& s)
{
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(')
            ++depth;
        if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !parts.empty())
        parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& text, const std::string& raw)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("jump_approx '" + raw + "': cannot read number '" + text + "'");
}

} // namespace

JumpApprox JumpApprox::parse(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text += c;
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw ConfigError("jump_approx '" + raw +
                          "': expected cp_truncate(M), ignore(rule), ar(rule) or decomposed(one_jump|two_jump, r)");
    const std::string head = text.substr(0, open);
    const auto args = split_top_level(text.substr(open + 1, text.size() - open - 2));
    JumpApprox a;
    if (head == "cp_truncate") {
        a.kind = Kind::cp_truncate;
        if (args.size() != 1)
            throw ConfigError("jump_approx '" + raw + "': cp_truncate takes one argument");
        if (args[0] == "inf") {
            a.max_jumps = kAllJumps;
        } else {
            const double m = parse_double(args[0], raw);
            if (m < 0 || m != std::floor(m))
                throw ConfigError("jump_approx '" + raw + "': M must be a nonnegative integer or inf");
            a.max_jumps = static_cast<int>(m);
        }
    } else if (head == "ignore" || head == "ar") {
        a.kind = head == "ignore" ? Kind::ignore : Kind::ar;
        if (args.size() != 1)
            throw ConfigError("jump_approx '" + raw + "': " + head + " takes one eps rule");
        a.eps_rule = levy::EpsRule::parse(args[0]);
    } else if (head == "decomposed") {
        a.kind = Kind::decomposed;
        if (args.empty() || args.size() > 3)
            throw ConfigError("jump_approx '" + raw + "': decomposed takes (one_jump|two_jump [, r [, rule]])");
        if (args[0] == "one_jump")
            a.bernoulli = BernoulliMode::one_jump;
        else if (args[0] == "two_jump")
            a.bernoulli = BernoulliMode::two_jump;
        else
            throw ConfigError("jump_approx '" + raw + "': expected one_jump or two_jump, got '" + args[0] + "'");
        if (args.size() >= 2)
            a.small_l.r = parse_double(args[1], raw);
        if (args.size() == 3)
            a.eps_rule = levy::EpsRule::parse(args[2]);
    } else {
        throw ConfigError("jump_approx '" + raw + "': unknown approximation '" + head + "'");
    }
    return a;
}

std::string JumpApprox::to_string() const
{
    std::ostringstream s;
    switch (kind) {
    case Kind::cp_truncate:
        s << "cp_truncate(" << (max_jumps == kAllJumps ? std::string("inf") : std::to_string(max_jumps)) << ")";
        break;
    case Kind::ignore: s << "ignore(" << eps_rule.to_string() << ")"; break;
    case Kind::ar: s << "ar(" << eps_rule.to_string() << ")"; break;
    case Kind::decomposed:
        s << "decomposed(" << (bernoulli == BernoulliMode::one_jump ? "one_jump" : "two_jump") << ", " << small_l.r
          << ", " << eps_rule.to_string() << ")";
        break;
    }
    return s.str();
}

JumpStepper::JumpStepper(const JumpCoefficients& h, const levy::LevyTriplet& triplet, const JumpApprox& approx,
                         double t, const flows::FlowMethod& flow, flows::NoiseKind noise)
    : h_(h), approx_(approx), t_(t), flow_(flow), noise_(noise)
{
    if (!(t > 0.0))
        throw DomainError("jump step: t must be positive");
    if (triplet.drift.size() != triplet.dimension())
        throw ConfigError("jump step: drift b has dimension " + std::to_string(triplet.drift.size()) +
                          ", measure has " + std::to_string(triplet.dimension()));
    if (h.driver_dim != triplet.dimension())
        throw ConfigError("jump step: h has " + std::to_string(h.driver_dim) + " columns, driver dimension is " +
                          std::to_string(triplet.dimension()));
    trivial_ = triplet.measure.is_zero() && triplet.drift.isZero(0.0);
    const auto& nu = triplet.measure;

    switch (approx.kind) {
    case JumpApprox::Kind::cp_truncate: {
        if (nu.infinite_activity())
            throw ConfigError("jump_approx cp_truncate needs a finite-activity measure; use ignore, ar or decomposed for " +
                              nu.describe());
        const State net = triplet.drift - nu.first_moment(0.0, 1.0);
        if (!net.isZero(1e-12))
            throw ConfigError("jump_approx cp_truncate needs b = int_{|y|<=1} y nu(dy) (pure compound Poisson driver)");
        cp_ = make_compound_poisson(nu);
        eps_ = 0.0;
        break;
    }
    case JumpApprox::Kind::ignore:
        eps_ = approx.eps_rule.resolve(nu, std::min(t, 1.0), levy::EpsMode::ignore);
        ar_.cutoff = make_cutoff(h, triplet, eps_);
        break;
    case JumpApprox::Kind::ar:
        eps_ = approx.eps_rule.resolve(nu, std::min(t, 1.0), levy::EpsMode::ar);
        ar_ = make_ar(h, triplet, eps_, approx.ar_substeps);
        break;
    case JumpApprox::Kind::decomposed: {
        if (nu.activity_index() >= 1.0)
            throw ConfigError("jump_approx decomposed needs int_{|y|<1} |y| nu < inf (alpha < 1), got " + nu.describe());
        eps_ = approx.eps_rule.resolve(nu, std::min(t, 1.0), levy::EpsMode::ignore);
        ar_.cutoff = make_cutoff(h, triplet, eps_);
        if (!nu.is_zero())
            small_ = make_small_jumps(nu, eps_, approx.small_l);
        tail_ = make_tail_jumps(nu, eps_, approx.tail_l, t, approx.bernoulli);
        if (approx.asymptotic_probability && approx.bernoulli == BernoulliMode::one_jump && tail_.bernoulli.tail_mass > 0)
            tail_.bernoulli.p1 = asymptotic_one_jump_probability(tail_.bernoulli.tail_mass, eps_,
                                                                 std::max(0.0, nu.activity_index()), t);
        break;
    }
    }
}

State JumpStepper::step(const State& x, Rng& rng, JumpDiagnostics* diag) const
{
    if (trivial_)
        return x;
    switch (approx_.kind) {
    case JumpApprox::Kind::cp_truncate: return compound_poisson_flow(h_, cp_, t_, x, approx_.max_jumps, rng, diag);
    case JumpApprox::Kind::ignore: return ignore_small_flow(h_, ar_.cutoff, t_, x, flow_, rng, diag);
    case JumpApprox::Kind::ar: return ar_flow(h_, ar_, t_, x, flow_, noise_, rng, diag);
    case JumpApprox::Kind::decomposed: return bernoulli_part(gaussian_part(drift_part(x), rng), rng, diag);
    }
    return x;
}

State JumpStepper::drift_part(const State& x) const
{
    return decomposed_drift_step(h_, ar_.cutoff, t_, x, flow_);
}

State JumpStepper::gaussian_part(const State& x, Rng& rng) const
{
    return small_jump_gaussian_step(h_, small_, t_, x, rng);
}

State JumpStepper::bernoulli_part(const State& x, Rng& rng, JumpDiagnostics* diag) const
{
    return approx_.bernoulli == BernoulliMode::one_jump ? one_jump_step(h_, tail_, x, rng, diag)
                                                        : two_jump_step(h_, tail_, x, rng, diag);
}

State JumpStepper::driver_increment(Rng& rng) const
{
    const int d = h_.driver_dim;
    State dy = State::Zero(d);
    if (trivial_)
        return dy;
    auto add_poisson = [&](double intensity, const levy::RegionSampler& jumps, int cap) {
        if (intensity <= 0.0)
            return;
        std::uint64_t n = rng.poisson(intensity * t_);
        if (cap >= 0)
            n = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(cap));
        for (std::uint64_t i = 0; i < n; ++i)
            dy += jumps.sample(rng);
    };
    switch (approx_.kind) {
    case JumpApprox::Kind::cp_truncate: add_poisson(cp_.intensity, cp_.jumps, approx_.max_jumps); break;
    case JumpApprox::Kind::ignore:
        dy += ar_.cutoff.drift * t_;
        add_poisson(ar_.cutoff.intensity, ar_.cutoff.jumps, -1);
        break;
    case JumpApprox::Kind::ar: {
        dy += ar_.cutoff.drift * t_;
        State w(ar_.sigma_root.cols());
        for (Eigen::Index j = 0; j < w.size(); ++j)
            w[j] = flows::sample_noise(noise_, t_, rng);
        dy += ar_.sigma_root * w;
        add_poisson(ar_.cutoff.intensity, ar_.cutoff.jumps, -1);
        break;
    }
    case JumpApprox::Kind::decomposed: {
        dy += ar_.cutoff.drift * t_;
        if (small_.lambda_eps > 0.0 && !small_.jumps.empty()) {
            const State y = small_.jumps.sample(rng);
            dy += y * (rng.normal() * std::sqrt(t_ * small_.lambda_eps / small_.l(y.norm())));
        }
        const auto& b = tail_.bernoulli;
        if (b.p1 > 0.0 && rng.bernoulli(b.p1)) {
            const State z = tail_.jumps.sample(rng);
            dy += z / b.l(z.norm());
            if (b.mode == BernoulliMode::two_jump && rng.bernoulli(b.p2))
                dy += tail_.jumps.sample(rng);
        }
        break;
    }
    }
    return dy;
}

} // namespace opsplit::jumps
