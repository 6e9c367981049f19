#pragma once

#include "labmkt/config.hpp"
#include "labmkt/market.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace labmkt {

enum class Verdict { fixed_point, oscillation, undecided };

std::string_view to_string(Verdict v);

/// One application of the large-N map
///   P_k(t) ∝ exp[gamma log(1 + k/K) - (beta/alpha) |P_k(t-1) - alpha/K|].
/// The kink at alpha/K is evaluated as written.
ProbabilityVector map_step(const ProbabilityVector& p_prev, const MarketConfig& cfg);

struct Trajectory {
    std::vector<ProbabilityVector> states;  // states[t] is P(t); states[0] is the initial condition
    Verdict verdict = Verdict::undecided;
    std::optional<std::size_t> period;              // set when verdict == oscillation
    std::optional<std::size_t> failure_first_time;  // first t with P_1(t) < failure_threshold
    std::size_t iterations_run = 0;

    const ProbabilityVector& final_state() const { return states.back(); }
    /// Smallest P_1 over the trailing `window` states. For a fixed point this
    /// is the fixed point's P_1; for a cycle it is the cycle minimum.
    double late_time_p1(std::size_t window) const;
};

/// Iterates map_step from p0 until the max-norm step falls below
/// cfg.fixed_point_tol, a cycle is detected, or cfg.max_iters steps ran.
///
/// A cycle of period L >= 2 is reported when the new state matches the state
/// L steps back to cfg.oscillation_tol, the last step is larger than that
/// tolerance, and the step size equals the one L steps back to 1e-9 relative.
/// The last condition keeps slowly damped period-2 transients, which also
/// revisit their past closely, from being reported as cycles.
Trajectory iterate(const MarketConfig& cfg, const ProbabilityVector& p0);
Trajectory iterate(const MarketConfig& cfg);  // p0 uniform

struct GammaScanRow {
    double gamma = 0.0;
    double steady_p1 = 0.0;
    bool failed = false;
    Verdict verdict = Verdict::undecided;
};

struct GammaScanResult {
    std::vector<GammaScanRow> table;
    /// Bisection-refined critical gamma; empty when no grid point fails.
    std::optional<double> gamma_c;
    /// First failing grid point, before refinement.
    std::optional<double> gamma_c_grid;
    /// Width of the final bisection bracket.
    double bracket_width = 0.0;
};

/// Late-time P_1 from the uniform start, as used by the scan.
GammaScanRow evaluate_gamma(const MarketConfig& cfg_template, double gamma);

/// Scans an increasing gamma grid for the first point whose late-time P_1 is
/// below cfg.failure_threshold, then bisects between that point and its
/// predecessor to `refine_width`. Grid points are evaluated concurrently with
/// results kept in grid order.
GammaScanResult critical_gamma_scan(const MarketConfig& cfg_template, std::span<const double> gamma_grid,
                                    double refine_width = 1e-2);

}  // namespace labmkt
