#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fgl::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& raw) {
    double v = 0.0;
    const auto* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("config key '" + key + "': not a number: '" + raw + "'");
    return v;
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = origin + ":" + std::to_string(number);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any [section]");
        cfg.set(section + "." + key, trim(line.substr(eq + 1)));
    }
    return cfg;
}

void Config::set(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
        throw ConfigError("config key '" + dotted_key + "' must look like section.key");
    values_[dotted_key] = value;
}

std::string Config::fetch(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = values_.find(key);
    const std::string& v = it == values_.end() ? fallback : it->second;
    resolved_[key] = v;
    return v;
}

double Config::real(const std::string& key, double fallback) {
    return to_real(key, fetch(key, format_real(fallback)));
}

long Config::integer(const std::string& key, long fallback) {
    const auto raw = fetch(key, std::to_string(fallback));
    long v = 0;
    const auto* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(raw.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("config key '" + key + "': not an integer: '" + raw + "'");
    return v;
}

bool Config::flag(const std::string& key, bool fallback) {
    const auto raw = fetch(key, fallback ? "true" : "false");
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + raw + "'");
}

std::string Config::text(const std::string& key, const std::string& fallback) { return fetch(key, fallback); }

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) {
    std::string joined;
    for (std::size_t i = 0; i < fallback.size(); ++i) joined += (i ? ", " : "") + format_real(fallback[i]);
    const auto raw = fetch(key, joined);
    std::vector<double> out;
    std::istringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_real(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

void Config::reject_unknown() const {
    std::vector<std::string> unknown;
    for (const auto& [key, value] : values_)
        if (!used_.count(key)) unknown.push_back(key);
    if (unknown.empty()) return;
    std::string msg = "unknown config key";
    msg += unknown.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", " : "") + unknown[i];
    throw ConfigError(msg);
}

}  // namespace fgl::cli
