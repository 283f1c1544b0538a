#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace YAML {
class Node;
}

namespace opsplit::cli {

/// A mapping read from a YAML document. Every getter marks its key as used;
/// check_all_used() rejects whatever was never asked for. Errors are
/// ConfigError and name the key with its full dotted path.
class ConfigFile {
public:
    static ConfigFile load(const std::filesystem::path& path);
    static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long long integer(const std::string& key) const;
    long long integer_or(const std::string& key, long long fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    /// A sequence, or a single scalar read as a one-element list.
    std::vector<std::string> text_list(const std::string& key) const;
    std::vector<double> number_list(const std::string& key) const;
    std::vector<long long> integer_list(const std::string& key) const;
    /// Sequence of numeric rows, e.g. [[0.1, 0.5], [-0.1, 0.5]].
    std::vector<std::vector<double>> number_table(const std::string& key) const;
    /// True when the value is a scalar that parses as a number.
    bool is_number(const std::string& key) const;
    bool is_section(const std::string& key) const;
    /// Nested mapping; its keys are checked by its own check_all_used().
    ConfigFile section(const std::string& key) const;

    /// Throws ConfigError naming the first key that no getter consumed.
    void check_all_used() const;
    /// Throws ConfigError naming `key` with the given reason.
    [[noreturn]] void fail(const std::string& key, const std::string& reason) const;

private:
    ConfigFile(std::shared_ptr<const YAML::Node> node, std::string prefix, std::string origin);
    YAML::Node require(const std::string& key) const;
    std::string path_of(const std::string& key) const;

    std::shared_ptr<const YAML::Node> node_;
    std::string prefix_;
    std::string origin_;
    std::shared_ptr<std::set<std::string>> used_;
};

} // namespace opsplit::cli
