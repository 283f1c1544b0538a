#include "opsplit/cli/config_file.hpp"

#include <cmath>
#include <yaml-cpp/yaml.h>

#include "opsplit/common/errors.hpp"

namespace opsplit::cli {

namespace {

/// Decimal or "p/q".
std::optional<double> parse_number(const std::string& s)
{
    auto whole = [](const std::string& t) -> std::optional<double> {
        if (t.empty())
            return std::nullopt;
        std::size_t used = 0;
        try {
            double v = std::stod(t, &used);
            if (used != t.size())
                return std::nullopt;
            return v;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
        auto p = whole(s.substr(0, slash));
        auto q = whole(s.substr(slash + 1));
        if (!p || !q || *q == 0.0)
            return std::nullopt;
        return *p / *q;
    }
    if (s == "inf" || s == ".inf" || s == "+.inf")
        return INFINITY;
    return whole(s);
}

} // namespace

ConfigFile::ConfigFile(std::shared_ptr<const YAML::Node> node, std::string prefix, std::string origin)
    : node_(std::move(node)), prefix_(std::move(prefix)), origin_(std::move(origin)),
      used_(std::make_shared<std::set<std::string>>())
{
}

ConfigFile ConfigFile::load(const std::filesystem::path& path)
{
    try {
        auto node = std::make_shared<YAML::Node>(YAML::LoadFile(path.string()));
        if (!node->IsMap())
            throw ConfigError(path.string() + ": top level must be a mapping of keys to values");
        return ConfigFile(node, "", path.string());
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot open config file " + path.string());
    } catch (const YAML::Exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin)
{
    try {
        auto node = std::make_shared<YAML::Node>(YAML::Load(text));
        if (!node->IsMap())
            throw ConfigError(origin + ": top level must be a mapping of keys to values");
        return ConfigFile(node, "", origin);
    } catch (const YAML::Exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

std::string ConfigFile::path_of(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

void ConfigFile::fail(const std::string& key, const std::string& reason) const
{
    throw ConfigError(origin_ + ": key '" + path_of(key) + "' " + reason);
}

bool ConfigFile::has(const std::string& key) const
{
    const YAML::Node& n = *node_;
    return static_cast<bool>(n[key]) && !n[key].IsNull();
}

YAML::Node ConfigFile::require(const std::string& key) const
{
    if (!has(key))
        fail(key, "is required but missing");
    used_->insert(key);
    return (*node_)[key];
}

double ConfigFile::number(const std::string& key) const
{
    const YAML::Node n = require(key);
    if (!n.IsScalar())
        fail(key, "must be a number");
    auto v = parse_number(n.Scalar());
    if (!v)
        fail(key, "must be a number, got '" + n.Scalar() + "'");
    return *v;
}

double ConfigFile::number_or(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : (used_->insert(key), fallback);
}

long long ConfigFile::integer(const std::string& key) const
{
    double v = number(key);
    if (!std::isfinite(v) || v != std::floor(v))
        fail(key, "must be an integer");
    return static_cast<long long>(v);
}

long long ConfigFile::integer_or(const std::string& key, long long fallback) const
{
    return has(key) ? integer(key) : (used_->insert(key), fallback);
}

std::string ConfigFile::text(const std::string& key) const
{
    const YAML::Node n = require(key);
    if (!n.IsScalar())
        fail(key, "must be a single value");
    return n.Scalar();
}

std::string ConfigFile::text_or(const std::string& key, const std::string& fallback) const
{
    return has(key) ? text(key) : (used_->insert(key), fallback);
}

std::vector<std::string> ConfigFile::text_list(const std::string& key) const
{
    const YAML::Node n = require(key);
    std::vector<std::string> out;
    if (n.IsScalar()) {
        out.push_back(n.Scalar());
        return out;
    }
    if (!n.IsSequence())
        fail(key, "must be a list");
    for (const auto& item : n) {
        if (!item.IsScalar())
            fail(key, "must be a list of single values");
        out.push_back(item.Scalar());
    }
    if (out.empty())
        fail(key, "must not be empty");
    return out;
}

std::vector<double> ConfigFile::number_list(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& s : text_list(key)) {
        auto v = parse_number(s);
        if (!v)
            fail(key, "must contain only numbers, got '" + s + "'");
        out.push_back(*v);
    }
    return out;
}

std::vector<long long> ConfigFile::integer_list(const std::string& key) const
{
    std::vector<long long> out;
    for (double v : number_list(key)) {
        if (!std::isfinite(v) || v != std::floor(v))
            fail(key, "must contain only integers");
        out.push_back(static_cast<long long>(v));
    }
    return out;
}

std::vector<std::vector<double>> ConfigFile::number_table(const std::string& key) const
{
    const YAML::Node n = require(key);
    if (!n.IsSequence() || n.size() == 0)
        fail(key, "must be a non-empty list of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : n) {
        if (!row.IsSequence())
            fail(key, "must be a list of rows like [size, probability]");
        std::vector<double> r;
        for (const auto& item : row) {
            auto v = item.IsScalar() ? parse_number(item.Scalar()) : std::nullopt;
            if (!v)
                fail(key, "must contain only numbers");
            r.push_back(*v);
        }
        out.push_back(std::move(r));
    }
    return out;
}

bool ConfigFile::is_number(const std::string& key) const
{
    if (!has(key))
        return false;
    const YAML::Node n = (*node_)[key];
    return n.IsScalar() && parse_number(n.Scalar()).has_value();
}

bool ConfigFile::is_section(const std::string& key) const { return has(key) && (*node_)[key].IsMap(); }

ConfigFile ConfigFile::section(const std::string& key) const
{
    const YAML::Node n = require(key);
    if (!n.IsMap())
        fail(key, "must be a mapping of keys to values");
    return ConfigFile(std::make_shared<YAML::Node>(n), path_of(key), origin_);
}

void ConfigFile::check_all_used() const
{
    for (const auto& kv : *node_) {
        std::string key = kv.first.as<std::string>();
        if (!used_->count(key))
            throw ConfigError(origin_ + ": unknown key '" + path_of(key) + "'");
    }
}

} // namespace opsplit::cli
