#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace labmkt {

/// Raised for any invalid model or scenario parameter. The message names the
/// offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using RawParams = std::map<std::string, std::string>;

/// All constants of one market. Companies are labelled 1..K, with K the
/// top-ranked company.
struct MarketConfig {
    std::size_t companies = 0;       // K
    std::size_t students = 0;        // N
    double alpha = 1.0;              // job offer ratio, V = alpha * N
    double beta = 0.0;               // market-history strength
    double gamma = 0.0;              // ranking-preference strength
    std::size_t sheets_per_student = 3;
    double failure_threshold = 1e-5;
    std::uint64_t seed = 1;
    std::size_t max_iters = 10000;
    double fixed_point_tol = 1e-10;
    std::size_t oscillation_window = 16;
    double oscillation_tol = 1e-8;

    /// V = alpha * N as an exact real.
    double total_quota() const { return alpha * static_cast<double>(students); }
    /// Mean-field quota per company, alpha * N / K.
    double quota() const { return total_quota() / static_cast<double>(companies); }

    // Microscopic mode works with an integer quota round(alpha N / K) and
    // recomputes V and alpha from it, so U = alpha * Omega + 1 - alpha stays
    // exact on every realization.
    std::int64_t micro_quota() const;
    std::int64_t micro_total_quota() const;
    double micro_alpha() const;
};

/// Throws ConfigError when an invariant of MarketConfig is violated.
void validate(const MarketConfig& cfg);

/// Builds a validated config from key-value pairs. K, N, alpha, beta and gamma
/// are required; every other key falls back to the MarketConfig default.
/// Unknown keys are rejected.
MarketConfig make_config(const RawParams& raw);

/// The key-value form accepted by make_config, used for manifests.
RawParams to_raw_params(const MarketConfig& cfg);

/// Canonical shortest round-trip text for a double.
std::string format_double(double x);

// Strict scalar parsing; the whole string must be consumed.
double parse_double(const std::string& key, const std::string& text);
std::uint64_t parse_unsigned(const std::string& key, const std::string& text);

}  // namespace labmkt
