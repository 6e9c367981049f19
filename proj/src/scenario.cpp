#include "labmkt/scenario.hpp"

#include "labmkt/frozen_line.hpp"
#include "labmkt/hightemp.hpp"
#include "labmkt/meanfield.hpp"
#include "labmkt/microsim.hpp"
#include "labmkt/parallel.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

namespace labmkt {

namespace fs = std::filesystem;

namespace {

template <typename T>
std::string join(const std::vector<T>& values)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out << ',';
        }
        if constexpr (std::is_floating_point_v<T>) {
            out << format_double(values[i]);
        }
        else {
            out << values[i];
        }
    }
    return out.str();
}

std::optional<std::string> take(RawParams& raw, const std::string& key)
{
    auto it = raw.find(key);
    if (it == raw.end()) {
        return std::nullopt;
    }
    std::string value = it->second;
    raw.erase(it);
    return value;
}

SumRule parse_sum_rule(const std::string& text)
{
    if (text == "integral") {
        return SumRule::integral;
    }
    if (text == "finite") {
        return SumRule::finite;
    }
    throw ConfigError("sum_rule must be 'integral' or 'finite', got '" + text + "'");
}

// Everything a single-point run writes besides its CSV files.
struct PointRun {
    std::vector<fs::path> files;
    KvList results;
};

std::vector<MarketConfig> sweep_points(const MarketConfig& base, const std::optional<Sweep>& sweep)
{
    if (!sweep) {
        return {base};
    }
    const auto axis = [](const std::vector<double>& values, double fallback) {
        return values.empty() ? std::vector<double>{fallback} : values;
    };
    std::vector<MarketConfig> points;
    for (const double beta : axis(sweep->beta, base.beta)) {
        for (const double gamma : axis(sweep->gamma, base.gamma)) {
            for (const double alpha : axis(sweep->alpha, base.alpha)) {
                MarketConfig cfg = base;
                cfg.beta = beta;
                cfg.gamma = gamma;
                cfg.alpha = alpha;
                validate(cfg);
                points.push_back(cfg);
            }
        }
    }
    return points;
}

void require_micro_quota(const MarketConfig& cfg)
{
    if (cfg.micro_quota() < 1) {
        throw ConfigError("alpha * N / K = " + format_double(cfg.quota()) +
                          " rounds to a zero quota; increase N or alpha");
    }
}

PointRun run_meanfield(const MarketConfig& cfg, const fs::path& dir)
{
    const Trajectory traj = iterate(cfg);
    PointRun run;

    CsvWriter csv(dir / "trajectory.csv", {"t", "k", "P_k"});
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
        for (std::size_t k = 1; k <= cfg.companies; ++k) {
            csv.cell(t).cell(k).cell(traj.states[t].company(k)).end_row();
        }
    }
    csv.close();
    run.files.push_back(dir / "trajectory.csv");

    CsvWriter summary(dir / "verdict.csv", {"verdict", "period", "iterations_run", "failure_first_time", "final_P1",
                                            "final_PK", "late_P1"});
    summary.cell(std::string(to_string(traj.verdict)))
        .cell(traj.period ? std::to_string(*traj.period) : std::string{})
        .cell(traj.iterations_run)
        .cell(traj.failure_first_time ? std::to_string(*traj.failure_first_time) : std::string{})
        .cell(traj.final_state().company(1))
        .cell(traj.final_state().company(cfg.companies))
        .cell(traj.late_time_p1(cfg.oscillation_window))
        .end_row();
    summary.close();
    run.files.push_back(dir / "verdict.csv");

    run.results.emplace_back("verdict", std::string(to_string(traj.verdict)));
    return run;
}

PointRun run_scan(const MarketConfig& cfg, const std::vector<double>& grid, const fs::path& dir)
{
    const GammaScanResult scan = critical_gamma_scan(cfg, grid);
    PointRun run;
    CsvWriter csv(dir / "scan.csv", {"gamma", "steady_P1", "failed"});
    for (const auto& row : scan.table) {
        csv.cell(row.gamma).cell(row.steady_p1).cell(row.failed).end_row();
    }
    csv.close();
    run.files.push_back(dir / "scan.csv");
    if (scan.gamma_c) {
        run.results.emplace_back("gamma_c", format_double(*scan.gamma_c));
        run.results.emplace_back("gamma_c_grid", format_double(*scan.gamma_c_grid));
        run.results.emplace_back("bracket_width", format_double(scan.bracket_width));
    }
    else {
        run.results.emplace_back("gamma_c", "no failure in range");
    }
    return run;
}

PointRun run_frozenline(const MarketConfig& cfg, const fs::path& dir)
{
    const FrozenLineReport report = frozen_line(cfg.companies, cfg.beta, cfg.gamma, cfg.alpha);
    PointRun run;
    CsvWriter csv(dir / "frozenline.csv", {"m", "lhs", "ratio", "frozen"});
    for (const auto& row : report.rows) {
        csv.cell(row.m).cell(row.lhs).cell(row.ratio).cell(row.frozen).end_row();
    }
    csv.close();
    run.files.push_back(dir / "frozenline.csv");
    run.results.emplace_back("ratio", format_double(report.ratio));
    run.results.emplace_back("m_star", format_double(report.m_star));
    run.results.emplace_back("frozen_count", std::to_string(report.frozen_set.size()));
    return run;
}

PointRun run_micro(const MarketConfig& cfg, std::size_t years, const std::vector<std::uint64_t>& seeds,
                   const fs::path& dir)
{
    const auto batch = run_batch(cfg, years, seeds);
    PointRun run;
    CsvWriter per_year(dir / "years.csv", {"year", "U", "Omega", "sum_m", "seed"});
    CsvWriter per_company(dir / "companies.csv", {"year", "k", "v_k", "m_k", "seed"});
    for (const auto& outcomes : batch) {
        for (const auto& o : outcomes) {
            per_year.cell(o.year).cell(o.unemployment).cell(o.job_supply).cell(o.sum_hires).cell(o.seed).end_row();
            for (std::size_t k = 1; k <= cfg.companies; ++k) {
                per_company.cell(o.year).cell(k).cell(o.sheet_counts[k - 1]).cell(o.hires[k - 1]).cell(o.seed).end_row();
            }
        }
    }
    per_year.close();
    per_company.close();
    run.files.push_back(dir / "years.csv");
    run.files.push_back(dir / "companies.csv");
    run.results.emplace_back("alpha_model", format_double(cfg.micro_alpha()));
    run.results.emplace_back("quota", std::to_string(cfg.micro_quota()));
    return run;
}

PointRun run_hightemp(const MarketConfig& cfg, SumRule sums, std::size_t years,
                      const std::vector<std::uint64_t>& seeds, const fs::path& dir)
{
    const ExpansionResult first = expansion_order1(cfg, {sums});
    const ExpansionResult second = expansion_order2(cfg, {sums});
    const AcceptanceProfile profile = acceptance_profile(first, cfg);
    for (const auto& w : first.warnings) {
        std::cerr << "warning: " << w << '\n';
    }

    PointRun run;
    CsvWriter csv(dir / "expansion.csv", {"k", "P1", "P1_hat", "P2_plus", "P2_minus", "phi_k", "branch"});
    for (std::size_t k = 1; k <= cfg.companies; ++k) {
        csv.cell(k)
            .cell(first.p_above[k - 1])
            .cell(first.p_below[k - 1])
            .cell(second.p_above[k - 1])
            .cell(second.p_below[k - 1])
            .cell(profile.phi[k - 1])
            .cell(std::string(to_string(first.branch[k - 1])))
            .end_row();
    }
    csv.close();
    run.files.push_back(dir / "expansion.csv");

    CsvWriter table(dir / "unemployment.csv",
                    {"a", "U_analytic", "U_analytic_factorial", "U_montecarlo", "U_montecarlo_se"});
    for (std::size_t a = 1; a <= cfg.sheets_per_student; ++a) {
        MarketConfig c = cfg;
        c.sheets_per_student = a;
        const auto batch = run_batch(c, years, seeds);
        std::vector<double> u;
        for (const auto& outcomes : batch) {
            u.push_back(outcomes.back().unemployment);
        }
        const double n = static_cast<double>(u.size());
        const double mean = std::accumulate(u.begin(), u.end(), 0.0) / n;
        double var = 0.0;
        for (const double x : u) {
            var += (x - mean) * (x - mean);
        }
        const double se = u.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
        table.cell(a)
            .cell(analytic_unemployment(profile.phi, a, Normalization::falling_factorial))
            .cell(analytic_unemployment(profile.phi, a, Normalization::factorial))
            .cell(mean)
            .cell(se)
            .end_row();
    }
    table.close();
    run.files.push_back(dir / "unemployment.csv");

    if (first.crossing_k) {
        run.results.emplace_back("crossing_k", std::to_string(*first.crossing_k));
    }
    for (std::size_t i = 0; i < first.warnings.size(); ++i) {
        run.results.emplace_back("warning_" + std::to_string(i + 1), first.warnings[i]);
    }
    return run;
}

PointRun run_mismatch(const EmpiricalSeries& series, const MarketConfig& cfg, std::size_t years,
                      const std::vector<std::uint64_t>& seeds, const fs::path& dir)
{
    const auto rows = mismatch_compare(series, cfg, years, seeds);
    PointRun run;
    CsvWriter csv(dir / "mismatch.csv",
                  {"year", "alpha", "U_model", "Omega_model", "U_emp", "Omega_emp", "alpha_model"});
    auto optional_cell = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string{}; };
    for (const auto& r : rows) {
        csv.cell(r.year)
            .cell(r.alpha)
            .cell(r.unemployment_model)
            .cell(r.job_supply_model)
            .cell(optional_cell(r.unemployment_emp))
            .cell(optional_cell(r.job_supply_emp))
            .cell(r.alpha_model)
            .end_row();
    }
    csv.close();
    run.files.push_back(dir / "mismatch.csv");
    return run;
}

}  // namespace

std::string_view to_string(Mode m)
{
    switch (m) {
    case Mode::meanfield:
        return "meanfield";
    case Mode::micro:
        return "micro";
    case Mode::hightemp:
        return "hightemp";
    case Mode::frozenline:
        return "frozenline";
    case Mode::mismatch:
        return "mismatch";
    case Mode::scan_gamma:
        return "scan-gamma";
    }
    return "meanfield";
}

Mode parse_mode(const std::string& name)
{
    for (const Mode m : {Mode::meanfield, Mode::micro, Mode::hightemp, Mode::frozenline, Mode::mismatch,
                         Mode::scan_gamma}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw UnknownModeError("unknown mode '" + name + "'");
}

std::vector<std::uint64_t> Scenario::seed_list() const
{
    if (!seeds.empty()) {
        return seeds;
    }
    std::vector<std::uint64_t> out(replicas);
    std::iota(out.begin(), out.end(), cfg.seed);
    return out;
}

std::vector<double> Scenario::gamma_grid() const
{
    const auto n = static_cast<std::size_t>(std::floor((gamma_max - gamma_min) / gamma_step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = gamma_min + static_cast<double>(i) * gamma_step;
    }
    return grid;
}

Scenario parse_scenario(RawParams raw, std::optional<Mode> mode_override)
{
    Scenario s;
    const auto mode_text = take(raw, "mode");
    if (mode_override) {
        s.mode = *mode_override;
    }
    else if (mode_text) {
        s.mode = parse_mode(*mode_text);
    }
    else {
        throw ConfigError("mode is required");
    }

    if (auto v = take(raw, "output_dir")) {
        s.output_dir = *v;
    }
    if (auto v = take(raw, "replicas")) {
        s.replicas = parse_unsigned("replicas", *v);
    }
    if (auto v = take(raw, "seeds")) {
        s.seeds = parse_unsigned_list("seeds", *v);
    }
    if (auto v = take(raw, "years")) {
        s.years = parse_unsigned("years", *v);
    }
    if (auto v = take(raw, "gamma_min")) {
        s.gamma_min = parse_double("gamma_min", *v);
    }
    if (auto v = take(raw, "gamma_max")) {
        s.gamma_max = parse_double("gamma_max", *v);
    }
    if (auto v = take(raw, "gamma_step")) {
        s.gamma_step = parse_double("gamma_step", *v);
    }
    if (auto v = take(raw, "series")) {
        s.series = *v;
    }
    if (auto v = take(raw, "sum_rule")) {
        s.sum_rule = parse_sum_rule(*v);
    }
    Sweep sweep;
    bool has_sweep = false;
    for (auto [key, axis] : {std::pair{"sweep_beta", &sweep.beta}, std::pair{"sweep_gamma", &sweep.gamma},
                             std::pair{"sweep_alpha", &sweep.alpha}}) {
        if (auto v = take(raw, key)) {
            *axis = parse_real_list(key, *v);
            has_sweep = true;
        }
    }
    if (has_sweep) {
        s.sweep = sweep;
    }

    if (s.mode == Mode::mismatch) {
        raw.try_emplace("alpha", "1");
        raw.try_emplace("beta", "1");
        raw.try_emplace("gamma", "1");
    }
    if (s.mode == Mode::frozenline) {
        raw.try_emplace("N", "1");
    }
    s.cfg = make_config(raw);

    if (s.replicas < 1) {
        throw ConfigError("replicas must be at least 1");
    }
    if (s.years < 1) {
        throw ConfigError("years must be at least 1");
    }
    if (s.mode == Mode::scan_gamma) {
        if (!(s.gamma_step > 0.0) || !(s.gamma_max >= s.gamma_min) || s.gamma_min < 0.0) {
            throw ConfigError("gamma grid needs 0 <= gamma_min <= gamma_max and gamma_step > 0");
        }
        if (s.sweep && !s.sweep->gamma.empty()) {
            throw ConfigError("scan-gamma does not accept a gamma sweep");
        }
    }
    if (s.mode == Mode::mismatch) {
        if (s.series.empty()) {
            throw ConfigError("mismatch mode needs an empirical series file (series)");
        }
        if (s.sweep) {
            throw ConfigError("mismatch mode takes alpha from the series and does not accept a sweep");
        }
    }
    if (s.mode == Mode::frozenline) {
        for (const auto& point : sweep_points(s.cfg, s.sweep)) {
            if (!(point.gamma > 0.0)) {
                throw ConfigError("frozenline needs gamma > 0");
            }
        }
    }
    if (s.mode == Mode::micro || s.mode == Mode::hightemp) {
        for (const auto& point : sweep_points(s.cfg, s.sweep)) {
            require_micro_quota(point);
        }
    }
    return s;
}

std::vector<MismatchRow> mismatch_compare(const EmpiricalSeries& series, const MarketConfig& cfg_template,
                                          std::size_t years, const std::vector<std::uint64_t>& seeds)
{
    if (series.empty()) {
        throw ConfigError("mismatch_compare: empty empirical series");
    }
    if (seeds.empty()) {
        throw ConfigError("mismatch_compare: need at least one seed");
    }
    std::vector<MarketConfig> configs;
    for (const auto& row : series) {
        MarketConfig cfg = cfg_template;
        cfg.alpha = row.alpha;
        validate(cfg);
        require_micro_quota(cfg);
        configs.push_back(cfg);
    }

    std::vector<MismatchRow> rows;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto batch = run_batch(configs[i], years, seeds);
        MismatchRow row;
        row.year = series[i].year;
        row.alpha = series[i].alpha;
        row.alpha_model = configs[i].micro_alpha();
        std::int64_t total_hires = 0;
        for (const auto& outcomes : batch) {
            total_hires += outcomes.back().sum_hires;
        }
        // Averages computed from the pooled hire count keep U = alpha Omega + 1 - alpha exact.
        const double mean_hires = static_cast<double>(total_hires) / static_cast<double>(batch.size());
        row.job_supply_model = 1.0 - mean_hires / static_cast<double>(configs[i].micro_total_quota());
        row.unemployment_model = 1.0 - mean_hires / static_cast<double>(configs[i].students);
        row.unemployment_emp = series[i].unemployment;
        row.job_supply_emp = series[i].job_supply;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<fs::path> run_scenario(const Scenario& scenario)
{
    // Everything that can be rejected as bad input is checked before the
    // output directory is touched.
    const auto points = sweep_points(scenario.cfg, scenario.sweep);
    const auto seeds = scenario.seed_list();
    EmpiricalSeries series;
    if (scenario.mode == Mode::mismatch) {
        series = read_empirical_series(scenario.series);
        for (const auto& row : series) {
            MarketConfig cfg = scenario.cfg;
            cfg.alpha = row.alpha;
            validate(cfg);
            require_micro_quota(cfg);
        }
    }
    const SumRule sums = scenario.sum_rule;

    std::error_code ec;
    fs::create_directories(scenario.output_dir, ec);
    if (ec || !fs::is_directory(scenario.output_dir)) {
        throw OutputError("cannot create output directory " + scenario.output_dir.string());
    }

    auto run_point = [&](const MarketConfig& cfg, const fs::path& dir) -> PointRun {
        switch (scenario.mode) {
        case Mode::meanfield:
            return run_meanfield(cfg, dir);
        case Mode::scan_gamma:
            return run_scan(cfg, scenario.gamma_grid(), dir);
        case Mode::frozenline:
            return run_frozenline(cfg, dir);
        case Mode::micro:
            return run_micro(cfg, scenario.years, seeds, dir);
        case Mode::hightemp:
            return run_hightemp(cfg, sums, scenario.years, seeds, dir);
        case Mode::mismatch:
            return run_mismatch(series, cfg, scenario.years, seeds, dir);
        }
        throw UnknownModeError("unhandled mode");
    };

    std::vector<fs::path> files;
    KvList results;
    if (!scenario.sweep) {
        PointRun run = run_point(scenario.cfg, scenario.output_dir);
        files = std::move(run.files);
        results = std::move(run.results);
    }
    else {
        CsvWriter index(scenario.output_dir / "points.csv", {"point", "beta", "gamma", "alpha", "dir"});
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::string name = "point_" + std::to_string(i);
            const fs::path dir = scenario.output_dir / name;
            fs::create_directories(dir, ec);
            if (ec) {
                throw OutputError("cannot create " + dir.string());
            }
            PointRun run = run_point(points[i], dir);
            files.insert(files.end(), run.files.begin(), run.files.end());
            for (auto& [key, value] : run.results) {
                results.emplace_back(name + "." + key, value);
            }
            index.cell(i).cell(points[i].beta).cell(points[i].gamma).cell(points[i].alpha).cell(name).end_row();
        }
        index.close();
        files.push_back(scenario.output_dir / "points.csv");
    }

    // The manifest is itself a scenario file: re-running it reproduces every table.
    KvList manifest;
    manifest.emplace_back("mode", std::string(to_string(scenario.mode)));
    for (const auto& [key, value] : to_raw_params(scenario.cfg)) {
        manifest.emplace_back(key, value);
    }
    manifest.emplace_back("seeds", join(seeds));
    manifest.emplace_back("years", std::to_string(scenario.years));
    if (scenario.mode == Mode::scan_gamma) {
        manifest.emplace_back("gamma_min", format_double(scenario.gamma_min));
        manifest.emplace_back("gamma_max", format_double(scenario.gamma_max));
        manifest.emplace_back("gamma_step", format_double(scenario.gamma_step));
    }
    if (scenario.mode == Mode::hightemp) {
        manifest.emplace_back("sum_rule", std::string(to_string(sums)));
    }
    if (scenario.mode == Mode::mismatch) {
        manifest.emplace_back("series", fs::absolute(scenario.series).string());
    }
    if (scenario.sweep) {
        if (!scenario.sweep->beta.empty()) {
            manifest.emplace_back("sweep_beta", join(scenario.sweep->beta));
        }
        if (!scenario.sweep->gamma.empty()) {
            manifest.emplace_back("sweep_gamma", join(scenario.sweep->gamma));
        }
        if (!scenario.sweep->alpha.empty()) {
            manifest.emplace_back("sweep_alpha", join(scenario.sweep->alpha));
        }
    }
    for (const auto& f : files) {
        manifest.emplace_back("# output", fs::relative(f, scenario.output_dir).string());
    }
    for (const auto& [key, value] : results) {
        manifest.emplace_back("# result " + key, value);
    }
    const fs::path manifest_path = scenario.output_dir / "manifest.txt";
    write_kv_file(manifest_path, manifest);
    files.push_back(manifest_path);
    return files;
}

}  // namespace labmkt
