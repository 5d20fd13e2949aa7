#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace primeseries::cli {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    Config config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        config.set(key, trim(line.substr(eq + 1)));
    }
    return config;
}

void Config::set(const std::string& key, std::string value) {
    entries_[key] = std::move(value);
}

std::string Resolver::raw(const std::string& key, const std::string* fallback) {
    consulted_.insert(key);
    const auto it = config_.entries().find(key);
    if (it != config_.entries().end()) {
        echo_[key] = it->second;
        return it->second;
    }
    if (!fallback) throw ConfigError("missing required setting: " + key);
    echo_[key] = *fallback;
    return *fallback;
}

std::string Resolver::text(const std::string& key, const std::string& fallback) {
    return raw(key, &fallback);
}

std::string Resolver::required_text(const std::string& key) { return raw(key, nullptr); }

double Resolver::number(const std::string& key, const std::string& fallback) {
    return parse_number(raw(key, &fallback), key);
}

double Resolver::required_number(const std::string& key) {
    return parse_number(raw(key, nullptr), key);
}

std::int64_t Resolver::integer(const std::string& key, const std::string& fallback) {
    return parse_integer(raw(key, &fallback), key);
}

std::uint64_t Resolver::counter(const std::string& key, const std::string& fallback) {
    return parse_counter(raw(key, &fallback), key);
}

std::uint64_t Resolver::required_counter(const std::string& key) {
    return parse_counter(raw(key, nullptr), key);
}

std::vector<double> Resolver::number_list(const std::string& key, const std::string& fallback) {
    return parse_number_list(raw(key, &fallback), key);
}

std::vector<double> Resolver::required_number_list(const std::string& key) {
    return parse_number_list(raw(key, nullptr), key);
}

bool Resolver::optional_text(const std::string& key, std::string& out) {
    consulted_.insert(key);
    const auto it = config_.entries().find(key);
    if (it == config_.entries().end()) return false;
    echo_[key] = it->second;
    out = it->second;
    return true;
}

void Resolver::reject_unknown() const {
    for (const auto& [key, value] : config_.entries())
        if (!consulted_.count(key)) throw ConfigError("unknown setting: " + key);
}

double parse_number(const std::string& text, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(key + ": not a number: '" + text + "'");
    return value;
}

std::int64_t parse_integer(const std::string& text, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long long value = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(key + ": not an integer: '" + text + "'");
    return value;
}

std::uint64_t parse_counter(const std::string& text, const std::string& key) {
    // Accepts scientific notation (1e8) as long as the value is an exact
    // nonnegative integer.
    const double value = parse_number(text, key);
    if (!(value >= 0) || value != static_cast<double>(static_cast<std::uint64_t>(value)))
        throw ConfigError(key + ": not a nonnegative integer: '" + text + "'");
    return static_cast<std::uint64_t>(value);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) out.push_back(parse_number(item, key));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::pair<int, int> parse_range(const std::string& text, const std::string& key) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto n = static_cast<int>(parse_integer(text, key));
        return {n, n};
    }
    const auto lo = static_cast<int>(parse_integer(text.substr(0, dots), key));
    const auto hi = static_cast<int>(parse_integer(text.substr(dots + 2), key));
    if (hi < lo) throw ConfigError(key + ": descending range: '" + text + "'");
    return {lo, hi};
}

} // namespace primeseries::cli
