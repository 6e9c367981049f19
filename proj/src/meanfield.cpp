#include "labmkt/meanfield.hpp"

#include "labmkt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace labmkt {

namespace {

constexpr double kAmplitudeRelTol = 1e-9;

}  // namespace

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::fixed_point:
        return "fixed_point";
    case Verdict::oscillation:
        return "oscillation";
    case Verdict::undecided:
        return "undecided";
    }
    return "undecided";
}

ProbabilityVector map_step(const ProbabilityVector& p_prev, const MarketConfig& cfg)
{
    if (p_prev.size() != cfg.companies) {
        throw std::invalid_argument("map_step: probability vector has wrong length");
    }
    // beta h_k with h_k = |P_k - alpha/K| / alpha reproduces the (beta/alpha) factor.
    const double kink = cfg.alpha / static_cast<double>(cfg.companies);
    std::vector<double> h(cfg.companies);
    const auto p = p_prev.values();
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = std::abs(p[i] - kink) / cfg.alpha;
    }
    return gibbs_weights(h, cfg);
}

double Trajectory::late_time_p1(std::size_t window) const
{
    std::size_t span = 1;
    switch (verdict) {
    case Verdict::fixed_point:
        span = 1;
        break;
    case Verdict::oscillation:
        span = period.value_or(1);
        break;
    case Verdict::undecided:
        span = window;
        break;
    }
    span = std::clamp<std::size_t>(span, 1, states.size());
    double p1 = 1.0;
    for (std::size_t i = states.size() - span; i < states.size(); ++i) {
        p1 = std::min(p1, states[i].company(1));
    }
    return p1;
}

Trajectory iterate(const MarketConfig& cfg, const ProbabilityVector& p0)
{
    validate(cfg);
    if (p0.size() != cfg.companies) {
        throw std::invalid_argument("iterate: initial condition has wrong length");
    }

    Trajectory traj;
    traj.states.reserve(std::min<std::size_t>(cfg.max_iters + 1, 1024));
    traj.states.push_back(p0);
    auto check_failure = [&](std::size_t t) {
        if (!traj.failure_first_time && traj.states[t].company(1) < cfg.failure_threshold) {
            traj.failure_first_time = t;
        }
    };
    check_failure(0);

    // steps[t] is the max-norm size of the step that produced states[t].
    std::vector<double> steps{0.0};
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
        traj.states.push_back(map_step(traj.states[t - 1], cfg));
        traj.iterations_run = t;
        check_failure(t);

        const auto current = traj.states[t].values();
        const double step = max_abs_diff(current, traj.states[t - 1].values());
        steps.push_back(step);
        if (step < cfg.fixed_point_tol) {
            traj.verdict = Verdict::fixed_point;
            break;
        }
        if (step <= cfg.oscillation_tol) {
            continue;
        }
        for (std::size_t lag = 2; lag <= cfg.oscillation_window && lag < t; ++lag) {
            // A damped oscillation also returns close to itself; only a cycle
            // keeps its step size unchanged over a full period.
            const bool same_amplitude = std::abs(step - steps[t - lag]) <= kAmplitudeRelTol * step;
            if (same_amplitude && max_abs_diff(current, traj.states[t - lag].values()) < cfg.oscillation_tol) {
                traj.verdict = Verdict::oscillation;
                traj.period = lag;
                break;
            }
        }
        if (traj.verdict == Verdict::oscillation) {
            break;
        }
    }
    return traj;
}

Trajectory iterate(const MarketConfig& cfg)
{
    return iterate(cfg, ProbabilityVector::uniform(cfg.companies));
}

GammaScanRow evaluate_gamma(const MarketConfig& cfg_template, double gamma)
{
    MarketConfig cfg = cfg_template;
    cfg.gamma = gamma;
    const Trajectory traj = iterate(cfg);
    GammaScanRow row;
    row.gamma = gamma;
    row.steady_p1 = traj.late_time_p1(cfg.oscillation_window);
    row.failed = row.steady_p1 < cfg.failure_threshold;
    row.verdict = traj.verdict;
    return row;
}

GammaScanResult critical_gamma_scan(const MarketConfig& cfg_template, std::span<const double> gamma_grid,
                                    double refine_width)
{
    if (gamma_grid.empty()) {
        throw std::invalid_argument("critical_gamma_scan: empty gamma grid");
    }
    for (std::size_t i = 1; i < gamma_grid.size(); ++i) {
        if (!(gamma_grid[i] > gamma_grid[i - 1])) {
            throw std::invalid_argument("critical_gamma_scan: gamma grid must be strictly increasing");
        }
    }
    if (!(refine_width > 0.0)) {
        throw std::invalid_argument("critical_gamma_scan: refine_width must be positive");
    }

    GammaScanResult result;
    result.table = parallel_map(gamma_grid.size(),
                                [&](std::size_t i) { return evaluate_gamma(cfg_template, gamma_grid[i]); });

    const auto first = std::find_if(result.table.begin(), result.table.end(),
                                    [](const GammaScanRow& r) { return r.failed; });
    if (first == result.table.end()) {
        return result;
    }
    result.gamma_c_grid = first->gamma;
    if (first == result.table.begin()) {
        result.gamma_c = first->gamma;
        return result;
    }

    double lo = std::prev(first)->gamma;
    double hi = first->gamma;
    while (hi - lo > refine_width) {
        const double mid = 0.5 * (lo + hi);
        if (evaluate_gamma(cfg_template, mid).failed) {
            hi = mid;
        }
        else {
            lo = mid;
        }
    }
    result.gamma_c = hi;
    result.bracket_width = hi - lo;
    return result;
}

}  // namespace labmkt
