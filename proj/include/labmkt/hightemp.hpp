#pragma once

#include "labmkt/config.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace labmkt {

/// The expansion is outside its domain (non-positive denominator).
class ExpansionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// How the company sums S1 = sum_k log(1 + k/K) and S2 = sum_k log^2(1 + k/K)
/// enter the closed forms.
///   integral: large-K limits S1 = K chi2 and S2 = 2 K chi1 (the closed forms
///             as usually written);
///   finite:   the exact finite-K sums.
enum class SumRule { integral, finite };

std::string_view to_string(SumRule r);

/// Which solution a company's steady-state probability is taken from.
///   above:    P_k > alpha/K (over-subscribed)
///   below:    P_k < alpha/K (under-subscribed, the "hatted" solution)
///   crossing: neither solution is self-consistent; P_k = alpha/K is used.
enum class Branch { above, below, crossing };

std::string_view to_string(Branch b);

struct ExpansionOptions {
    SumRule sums = SumRule::integral;
};

struct ExpansionConstants {
    double chi1 = 0.0;  // (log 2)^2 - 2 log 2 + 1
    double chi2 = 0.0;  // 2 log 2 - 1
    double log_sum = 0.0;     // S1 as used
    double log_sq_sum = 0.0;  // S2 as used
    double B = 0.0;           // K + gamma S1 + beta
    std::vector<double> psi_plus;   // gamma log(1 + k/K) + beta/K + 1
    std::vector<double> psi_minus;  // gamma log(1 + k/K) - beta/K + 1
};

struct ExpansionResult {
    int order = 0;
    std::vector<double> p_above;  // solution assuming P_k > alpha/K
    std::vector<double> p_below;  // solution assuming P_k < alpha/K
    std::vector<Branch> branch;   // per-k self-consistent assignment
    std::vector<double> selected; // per-k value from the assigned branch
    std::optional<std::size_t> crossing_k;  // first k (1-based) whose branch differs from company 1's
    ExpansionConstants constants;
    std::vector<std::string> warnings;  // set when gamma or beta/alpha exceeds 0.5
};

ExpansionResult expansion_order0(const MarketConfig& cfg);
ExpansionResult expansion_order1(const MarketConfig& cfg, ExpansionOptions opts = {});
/// Second-order closed form. The denominator reads
///   beta (psi_pm -/+ 1)/alpha + B + gamma^2 S2/2
///     - (beta gamma / (alpha B)) (gamma S2 + (K + beta) S1 / K),
/// i.e. with the sign of the psi term exactly as in the published form.
ExpansionResult expansion_order2(const MarketConfig& cfg, ExpansionOptions opts = {});

struct AcceptanceProfile {
    std::vector<double> phi;               // phi_k, entry k - 1
    std::optional<std::size_t> crossing_k;
};

/// phi_k = alpha/K on the over-subscribed branch, else the under-subscribed
/// solution (clamped to [0, 1]).
AcceptanceProfile acceptance_profile(const ExpansionResult& expansion, const MarketConfig& cfg);

/// Denominator applied to e_a(1 - phi_1, ..., 1 - phi_K).
///   falling_factorial: K (K-1) ... (K-a+1)
///   factorial:         a!
enum class Normalization { falling_factorial, factorial };

std::string_view to_string(Normalization n);

/// Elementary symmetric polynomial e_degree(x) by the company-by-company
/// recurrence, O(size * degree).
double elementary_symmetric(std::span<const double> x, std::size_t degree);

/// U = e_a(1 - phi) / normalization.
double analytic_unemployment(std::span<const double> phi, std::size_t sheets,
                             Normalization norm = Normalization::falling_factorial);

}  // namespace labmkt
