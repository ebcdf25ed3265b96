#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgl::cli {

/// Usage or configuration problem; the CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat "section.key" -> value store read from an INI-style file:
///
///   # comment
///   [evolution]
///   p = 2
///
/// Keys outside any section are rejected. Every lookup materialises the
/// default it used, so resolved() lists the full effective configuration.
class Config {
public:
    Config() = default;

    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text, const std::string& origin = "<string>");

    /// "section.key" = value; later calls win.
    void set(const std::string& dotted_key, const std::string& value);
    bool has(const std::string& dotted_key) const { return values_.count(dotted_key) != 0; }

    double real(const std::string& key, double fallback);
    long integer(const std::string& key, long fallback);
    bool flag(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback);
    std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);

    /// Throws ConfigError naming every key that no lookup consumed.
    void reject_unknown() const;

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    std::string fetch(const std::string& key, const std::string& fallback);

    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> resolved_;
    std::set<std::string> used_;
};

/// Shortest round-trip decimal form of a double.
std::string format_real(double v);

}  // namespace fgl::cli
