// Command-line driver for the labor-market simulator.
//
//   labmkt meanfield  --K 50 --N 5000 --alpha 1 --beta 15 --gamma 0.5 --out-dir out/osc
//   labmkt run out/osc/manifest.txt --out-dir out/rerun

#include "labmkt/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using labmkt::Mode;
using labmkt::RawParams;

struct FlagSet {
    RawParams values;
    std::string config_file;
};

void add_flag(CLI::App* cmd, FlagSet& flags, const std::string& flag, const std::string& key, const std::string& help)
{
    cmd->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_common_flags(CLI::App* cmd, FlagSet& flags)
{
    cmd->add_option("--config", flags.config_file, "key = value file; flags given on the command line win");
    add_flag(cmd, flags, "--K", "K", "number of companies");
    add_flag(cmd, flags, "--N", "N", "number of students");
    add_flag(cmd, flags, "--alpha", "alpha", "job offer ratio V/N");
    add_flag(cmd, flags, "--beta", "beta", "market-history strength");
    add_flag(cmd, flags, "--gamma", "gamma", "ranking-preference strength");
    add_flag(cmd, flags, "--a", "a", "entry sheets per student");
    add_flag(cmd, flags, "--seed", "seed", "base RNG seed");
    add_flag(cmd, flags, "--iters", "max_iters", "iteration budget of the mean-field map");
    add_flag(cmd, flags, "--failure-threshold", "failure_threshold", "business-failure threshold on P_1");
    add_flag(cmd, flags, "--out-dir", "output_dir", "output directory");
    add_flag(cmd, flags, "--years", "years", "simulated business years (micro runs)");
    add_flag(cmd, flags, "--replicas", "replicas", "number of seeds, starting at --seed");
    add_flag(cmd, flags, "--seeds", "seeds", "explicit comma-separated seed list");
    add_flag(cmd, flags, "--sweep-beta", "sweep_beta", "comma-separated beta grid");
    add_flag(cmd, flags, "--sweep-gamma", "sweep_gamma", "comma-separated gamma grid");
    add_flag(cmd, flags, "--sweep-alpha", "sweep_alpha", "comma-separated alpha grid");
}

RawParams merged(const FlagSet& flags)
{
    RawParams raw;
    if (!flags.config_file.empty()) {
        raw = labmkt::read_kv_file(flags.config_file);
    }
    for (const auto& [key, value] : flags.values) {
        raw[key] = value;
    }
    return raw;
}

int report(int code, const std::string& what)
{
    std::cerr << "labmkt: " << what << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probabilistic labor-market simulator: mean-field map, micro simulation and analytics"};
    app.require_subcommand(1);

    std::map<Mode, FlagSet> flags;
    std::map<Mode, CLI::App*> commands;
    const std::pair<Mode, const char*> modes[] = {
        {Mode::meanfield, "iterate the mean-field map and classify the trajectory"},
        {Mode::micro, "run the finite-N stochastic market"},
        {Mode::hightemp, "high-temperature expansion tables and analytic U"},
        {Mode::frozenline, "frozen-ranking boundary table"},
        {Mode::mismatch, "model (U, Omega) per year of an empirical alpha series"},
        {Mode::scan_gamma, "scan gamma for the business-failure transition"},
    };
    for (const auto& [mode, help] : modes) {
        CLI::App* cmd = app.add_subcommand(std::string(labmkt::to_string(mode)), help);
        add_common_flags(cmd, flags[mode]);
        commands[mode] = cmd;
    }
    add_flag(commands[Mode::scan_gamma], flags[Mode::scan_gamma], "--gamma-min", "gamma_min", "grid start");
    add_flag(commands[Mode::scan_gamma], flags[Mode::scan_gamma], "--gamma-max", "gamma_max", "grid end");
    add_flag(commands[Mode::scan_gamma], flags[Mode::scan_gamma], "--gamma-step", "gamma_step", "grid step");
    add_flag(commands[Mode::mismatch], flags[Mode::mismatch], "--series", "series",
             "CSV with columns year,alpha[,U,Omega]");
    add_flag(commands[Mode::hightemp], flags[Mode::hightemp], "--sum-rule", "sum_rule",
             "integral (large-K closed form) or finite (exact company sums)");

    std::string scenario_file;
    std::optional<std::string> run_out_dir;
    CLI::App* run = app.add_subcommand("run", "run a scenario file (a manifest.txt works too)");
    run->add_option("scenario", scenario_file, "scenario key = value file")->required();
    run->add_option("--out-dir", run_out_dir, "override output_dir");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ExtrasError& e) {
        if (app.get_subcommands().empty()) {
            return report(labmkt::exit_unknown_mode, std::string("unknown mode: ") + e.what());
        }
        return report(labmkt::exit_config_error, e.what());
    }
    catch (const CLI::RequiredError& e) {
        if (app.get_subcommands().empty()) {
            const std::string known = "meanfield, micro, hightemp, frozenline, mismatch, scan-gamma, run";
            if (argc > 1 && argv[1][0] != '-') {
                return report(labmkt::exit_unknown_mode,
                              "unknown mode '" + std::string(argv[1]) + "'; expected one of " + known);
            }
            return report(labmkt::exit_unknown_mode, "missing mode; one of " + known);
        }
        return report(labmkt::exit_config_error, e.what());
    }
    catch (const CLI::ParseError& e) {
        return report(labmkt::exit_config_error, e.what());
    }

    try {
        labmkt::Scenario scenario;
        if (run->parsed()) {
            RawParams raw = labmkt::read_kv_file(scenario_file);
            if (run_out_dir) {
                raw["output_dir"] = *run_out_dir;
            }
            scenario = labmkt::parse_scenario(std::move(raw));
        }
        else {
            for (const auto& [mode, cmd] : commands) {
                if (cmd->parsed()) {
                    scenario = labmkt::parse_scenario(merged(flags[mode]), mode);
                }
            }
        }
        const auto files = labmkt::run_scenario(scenario);
        for (const auto& f : files) {
            std::cout << f.string() << '\n';
        }
        return labmkt::exit_ok;
    }
    catch (const labmkt::UnknownModeError& e) {
        return report(labmkt::exit_unknown_mode, e.what());
    }
    catch (const labmkt::ConfigError& e) {
        return report(labmkt::exit_config_error, e.what());
    }
    catch (const labmkt::OutputError& e) {
        return report(labmkt::exit_output_error, e.what());
    }
    catch (const std::exception& e) {
        return report(labmkt::exit_runtime_error, e.what());
    }
}
