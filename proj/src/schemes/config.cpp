#include "opsplit/schemes/config.hpp"

#include <array>
#include <sstream>

#include "opsplit/common/errors.hpp"

namespace opsplit::schemes {

namespace {

constexpr std::array<std::pair<SchemeKind, const char*>, 7> kNames{{
    {SchemeKind::euler_maruyama, "euler_maruyama"},
    {SchemeKind::nv_a, "nv_a"},
    {SchemeKind::nv_b, "nv_b"},
    {SchemeKind::splitting, "splitting"},
    {SchemeKind::nv_extrapolated, "nv_extrapolated"},
    {SchemeKind::fujiwara4, "fujiwara4"},
    {SchemeKind::one_jump_first_order, "one_jump_first_order"},
}};

} // namespace

const char* to_string(SchemeKind kind)
{
    for (const auto& [k, name] : kNames)
        if (k == kind)
            return name;
    return "?";
}

SchemeKind parse_scheme_kind(const std::string& name)
{
    for (const auto& [k, n] : kNames)
        if (name == n)
            return k;
    std::string known;
    for (const auto& [k, n] : kNames)
        known += std::string(known.empty() ? "" : ", ") + n;
    throw ConfigError("scheme: unknown scheme '" + name + "' (expected one of " + known + ")");
}

int documented_order(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::euler_maruyama:
    case SchemeKind::one_jump_first_order: return 1;
    case SchemeKind::fujiwara4: return 4;
    default: return 2;
    }
}

void SchemeConfig::validate(const SdeModel& model) const
{
    model.validate();
    const int order = documented_order(kind);
    const bool uses_flows = kind != SchemeKind::euler_maruyama && kind != SchemeKind::one_jump_first_order;
    if (uses_flows && flow.kind != flows::FlowMethod::Kind::exact && flow.local_order() < 2 * order + 1)
        throw ConfigError("flow: " + std::string(to_string(kind)) + " needs coordinate flows of local order >= " +
                          std::to_string(2 * order + 1) + ", got " + flow.to_string());
    if (uses_flows && flow.kind == flows::FlowMethod::Kind::exact) {
        auto check = [&](const flows::VectorFieldSpec& v, const std::string& what) {
            if (!v.has_flow() && !v.is_zero())
                throw ConfigError("flow: " + what + " has no closed-form flow; choose taylor(m) or rk(m)");
        };
        for (std::size_t i = 0; i < model.diffusion.size(); ++i)
            check(model.diffusion[i], "diffusion field " + std::to_string(i + 1));
    }
    if (kind == SchemeKind::fujiwara4 && noise != flows::NoiseKind::gaussian)
        throw ConfigError("noise: fujiwara4 needs gaussian noise (three_point matches moments through order 5 only)");
    if (kind == SchemeKind::one_jump_first_order &&
        !(jump.kind == jumps::JumpApprox::Kind::decomposed && jump.bernoulli == jumps::BernoulliMode::one_jump))
        throw ConfigError("jump_approx: one_jump_first_order needs decomposed(one_jump, ...), got " + jump.to_string());
    if (model.has_jumps() && jump.kind == jumps::JumpApprox::Kind::cp_truncate && model.triplet.measure.infinite_activity())
        throw ConfigError("jump_approx: cp_truncate needs a finite-activity measure, the model has " +
                          model.triplet.measure.describe());
}

std::string SchemeConfig::describe() const
{
    std::ostringstream s;
    s << "scheme = " << to_string(kind) << ", flow = " << flow.to_string() << ", noise = " << flows::to_string(noise)
      << ", jump_approx = " << jump.to_string();
    return s.str();
}

} // namespace opsplit::schemes
