#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace primeseries::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration.  Keys may be dotted (model.sigma2); '#'
// starts a comment; flags override file entries via set().
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);

    void set(const std::string& key, std::string value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

// Pulls typed values out of a Config, records every key it consults together
// with the effective value (user-supplied or default), and afterwards rejects
// keys nobody asked for.  The recorded map is the config echo in reports:
// feeding it back as a config file reproduces the run.
class Resolver {
public:
    explicit Resolver(const Config& config) : config_(config) {}

    std::string text(const std::string& key, const std::string& fallback);
    std::string required_text(const std::string& key);
    double number(const std::string& key, const std::string& fallback);
    double required_number(const std::string& key);
    std::int64_t integer(const std::string& key, const std::string& fallback);
    std::uint64_t counter(const std::string& key, const std::string& fallback);
    std::uint64_t required_counter(const std::string& key);
    std::vector<double> number_list(const std::string& key, const std::string& fallback);
    std::vector<double> required_number_list(const std::string& key);

    // Declares a key as known without requiring a value (optional settings).
    bool optional_text(const std::string& key, std::string& out);

    void reject_unknown() const;
    const std::map<std::string, std::string>& echo() const { return echo_; }

private:
    std::string raw(const std::string& key, const std::string* fallback);

    const Config& config_;
    std::set<std::string> consulted_;
    std::map<std::string, std::string> echo_;
};

double parse_number(const std::string& text, const std::string& key);
std::uint64_t parse_counter(const std::string& text, const std::string& key);
std::int64_t parse_integer(const std::string& text, const std::string& key);
std::vector<double> parse_number_list(const std::string& text, const std::string& key);

// "a..b" inclusive integer range, "a" alone meaning a..a.
std::pair<int, int> parse_range(const std::string& text, const std::string& key);

} // namespace primeseries::cli
