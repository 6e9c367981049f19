#include "labmkt/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>

namespace labmkt {

namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "K",         "N",         "alpha",           "beta",           "gamma",
        "a",         "failure_threshold", "seed",    "max_iters",      "fixed_point_tol",
        "oscillation_window", "oscillation_tol",
    };
    return keys;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::int64_t MarketConfig::micro_quota() const
{
    return std::llround(quota());
}

std::int64_t MarketConfig::micro_total_quota() const
{
    return micro_quota() * static_cast<std::int64_t>(companies);
}

double MarketConfig::micro_alpha() const
{
    return static_cast<double>(micro_total_quota()) / static_cast<double>(students);
}

void validate(const MarketConfig& cfg)
{
    if (cfg.companies < 2) {
        throw ConfigError("K must be at least 2");
    }
    if (cfg.students < 1) {
        throw ConfigError("N must be at least 1");
    }
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
        throw ConfigError("alpha must be positive");
    }
    if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) {
        throw ConfigError("beta must be non-negative");
    }
    if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
        throw ConfigError("gamma must be non-negative");
    }
    if (cfg.sheets_per_student < 1) {
        throw ConfigError("a (sheets per student) must be at least 1");
    }
    if (cfg.sheets_per_student > cfg.companies) {
        throw ConfigError("a (sheets per student) must not exceed K");
    }
    if (!(cfg.failure_threshold > 0.0)) {
        throw ConfigError("failure_threshold must be positive");
    }
    if (cfg.max_iters < 1) {
        throw ConfigError("max_iters must be at least 1");
    }
    if (!(cfg.fixed_point_tol > 0.0)) {
        throw ConfigError("fixed_point_tol must be positive");
    }
    if (cfg.oscillation_window < 2) {
        throw ConfigError("oscillation_window must be at least 2");
    }
    if (!(cfg.oscillation_tol > 0.0)) {
        throw ConfigError("oscillation_tol must be positive");
    }
}

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected a real number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

MarketConfig make_config(const RawParams& raw)
{
    for (const auto& [key, value] : raw) {
        if (!known_keys().contains(key)) {
            throw ConfigError("unknown parameter '" + key + "'");
        }
    }
    for (const char* required : {"K", "N", "alpha", "beta", "gamma"}) {
        if (!raw.contains(required)) {
            throw ConfigError(std::string(required) + " is required");
        }
    }

    MarketConfig cfg;
    cfg.companies = parse_unsigned("K", raw.at("K"));
    cfg.students = parse_unsigned("N", raw.at("N"));
    cfg.alpha = parse_double("alpha", raw.at("alpha"));
    cfg.beta = parse_double("beta", raw.at("beta"));
    cfg.gamma = parse_double("gamma", raw.at("gamma"));

    auto optional = [&raw](const char* key, auto& field, auto parse) {
        if (auto it = raw.find(key); it != raw.end()) {
            field = static_cast<std::remove_reference_t<decltype(field)>>(parse(key, it->second));
        }
    };
    optional("a", cfg.sheets_per_student, parse_unsigned);
    optional("failure_threshold", cfg.failure_threshold, parse_double);
    optional("seed", cfg.seed, parse_unsigned);
    optional("max_iters", cfg.max_iters, parse_unsigned);
    optional("fixed_point_tol", cfg.fixed_point_tol, parse_double);
    optional("oscillation_window", cfg.oscillation_window, parse_unsigned);
    optional("oscillation_tol", cfg.oscillation_tol, parse_double);

    validate(cfg);
    return cfg;
}

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

RawParams to_raw_params(const MarketConfig& cfg)
{
    return {
        {"K", std::to_string(cfg.companies)},
        {"N", std::to_string(cfg.students)},
        {"alpha", format_double(cfg.alpha)},
        {"beta", format_double(cfg.beta)},
        {"gamma", format_double(cfg.gamma)},
        {"a", std::to_string(cfg.sheets_per_student)},
        {"failure_threshold", format_double(cfg.failure_threshold)},
        {"seed", std::to_string(cfg.seed)},
        {"max_iters", std::to_string(cfg.max_iters)},
        {"fixed_point_tol", format_double(cfg.fixed_point_tol)},
        {"oscillation_window", std::to_string(cfg.oscillation_window)},
        {"oscillation_tol", format_double(cfg.oscillation_tol)},
    };
}

}  // namespace labmkt
