#pragma once

#include "labmkt/config.hpp"
#include "labmkt/hightemp.hpp"
#include "labmkt/table_io.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace labmkt {

enum class Mode { meanfield, micro, hightemp, frozenline, mismatch, scan_gamma };

std::string_view to_string(Mode m);

/// Mode name not recognised.
class UnknownModeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

Mode parse_mode(const std::string& name);

/// Process exit codes of the command-line driver.
enum ExitCode : int {
    exit_ok = 0,
    exit_runtime_error = 1,
    exit_config_error = 2,
    exit_unknown_mode = 3,
    exit_output_error = 4,
};

struct Sweep {
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> alpha;
};

struct Scenario {
    MarketConfig cfg;
    Mode mode = Mode::meanfield;
    std::optional<Sweep> sweep;
    std::filesystem::path output_dir = "out";
    std::size_t replicas = 1;
    std::vector<std::uint64_t> seeds;  // explicit seed list; overrides replicas
    std::size_t years = 20;            // micro-simulated business years
    double gamma_min = 0.0;            // scan-gamma grid
    double gamma_max = 15.0;
    double gamma_step = 0.5;
    std::filesystem::path series;      // mismatch input
    SumRule sum_rule = SumRule::integral;  // hightemp closed forms

    /// Seeds actually used: the explicit list, else cfg.seed, cfg.seed + 1, ...
    std::vector<std::uint64_t> seed_list() const;
    std::vector<double> gamma_grid() const;
};

/// Splits scenario keys (mode, output_dir, replicas, seeds, years, sweep_*,
/// gamma_*, series) from model keys and validates both. The mode may come from
/// `mode_override` (a subcommand) or the `mode` key.
Scenario parse_scenario(RawParams raw, std::optional<Mode> mode_override = std::nullopt);

struct MismatchRow {
    std::string year;
    double alpha = 0.0;        // from the series
    double alpha_model = 0.0;  // K round(alpha N / K) / N, used by the simulation
    double unemployment_model = 0.0;
    double job_supply_model = 0.0;
    std::optional<double> unemployment_emp;
    std::optional<double> job_supply_emp;
};

/// For each year, simulates the market with that year's alpha and averages the
/// final-year U and Omega over the seeds.
std::vector<MismatchRow> mismatch_compare(const EmpiricalSeries& series, const MarketConfig& cfg_template,
                                          std::size_t years, const std::vector<std::uint64_t>& seeds);

/// Runs the scenario and writes CSV tables plus `manifest.txt` (written last)
/// into scenario.output_dir. Returns the files written, manifest included.
std::vector<std::filesystem::path> run_scenario(const Scenario& scenario);

}  // namespace labmkt
