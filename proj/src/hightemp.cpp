#include "labmkt/hightemp.hpp"

#include "labmkt/market.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace labmkt {

namespace {

constexpr double kValidityLimit = 0.5;

ExpansionConstants make_constants(const MarketConfig& cfg, SumRule sums)
{
    const RankingSchedule ranking(cfg.companies);
    const double K = static_cast<double>(cfg.companies);
    const double ln2 = std::numbers::ln2;

    ExpansionConstants c;
    c.chi1 = ln2 * ln2 - 2.0 * ln2 + 1.0;
    c.chi2 = 2.0 * ln2 - 1.0;
    if (sums == SumRule::integral) {
        c.log_sum = K * c.chi2;
        c.log_sq_sum = 2.0 * K * c.chi1;
    }
    else {
        for (std::size_t k = 1; k <= cfg.companies; ++k) {
            const double l = ranking.log_epsilon(k);
            c.log_sum += l;
            c.log_sq_sum += l * l;
        }
    }
    c.B = K + cfg.gamma * c.log_sum + cfg.beta;
    c.psi_plus.resize(cfg.companies);
    c.psi_minus.resize(cfg.companies);
    for (std::size_t k = 1; k <= cfg.companies; ++k) {
        const double tilt = cfg.gamma * ranking.log_epsilon(k);
        c.psi_plus[k - 1] = tilt + cfg.beta / K + 1.0;
        c.psi_minus[k - 1] = tilt - cfg.beta / K + 1.0;
    }
    return c;
}

std::vector<std::string> validity_warnings(const MarketConfig& cfg)
{
    std::vector<std::string> w;
    if (cfg.gamma > kValidityLimit) {
        w.push_back("gamma = " + format_double(cfg.gamma) + " exceeds 0.5; high-temperature expansion unreliable");
    }
    if (cfg.beta / cfg.alpha > kValidityLimit) {
        w.push_back("beta/alpha = " + format_double(cfg.beta / cfg.alpha) +
                    " exceeds 0.5; high-temperature expansion unreliable");
    }
    return w;
}

void assign_branches(ExpansionResult& r, const MarketConfig& cfg)
{
    const double kink = cfg.alpha / static_cast<double>(cfg.companies);
    const std::size_t K = cfg.companies;
    r.branch.resize(K);
    r.selected.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
        if (r.p_above[i] > kink) {
            r.branch[i] = Branch::above;
            r.selected[i] = r.p_above[i];
        }
        else if (r.p_below[i] < kink) {
            r.branch[i] = Branch::below;
            r.selected[i] = r.p_below[i];
        }
        else {
            r.branch[i] = Branch::crossing;
            r.selected[i] = kink;
        }
    }
    for (std::size_t i = 1; i < K; ++i) {
        if (r.branch[i] != r.branch[0]) {
            r.crossing_k = i + 1;
            break;
        }
    }
}

double checked_denominator(double d, const char* what)
{
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw ExpansionError(std::string(what) + " denominator is not positive (" + format_double(d) +
                             "); expansion invalid for these parameters");
    }
    return d;
}

}  // namespace

std::string_view to_string(Branch b)
{
    switch (b) {
    case Branch::above:
        return "above";
    case Branch::below:
        return "below";
    case Branch::crossing:
        return "crossing";
    }
    return "crossing";
}

std::string_view to_string(SumRule r)
{
    return r == SumRule::integral ? "integral" : "finite";
}

std::string_view to_string(Normalization n)
{
    return n == Normalization::falling_factorial ? "falling_factorial" : "factorial";
}

ExpansionResult expansion_order0(const MarketConfig& cfg)
{
    validate(cfg);
    ExpansionResult r;
    r.order = 0;
    r.constants = make_constants(cfg, SumRule::integral);
    r.p_above.assign(cfg.companies, 1.0 / static_cast<double>(cfg.companies));
    r.p_below = r.p_above;
    assign_branches(r, cfg);
    r.warnings = validity_warnings(cfg);
    return r;
}

ExpansionResult expansion_order1(const MarketConfig& cfg, ExpansionOptions opts)
{
    validate(cfg);
    ExpansionResult r;
    r.order = 1;
    r.constants = make_constants(cfg, opts.sums);
    const auto& c = r.constants;

    const double K = static_cast<double>(cfg.companies);
    const double base = K + cfg.gamma * c.log_sum;
    const double den_above = checked_denominator(base + cfg.beta, "first-order (above)");
    const double den_below = checked_denominator(base - cfg.beta, "first-order (below)");

    r.p_above.resize(cfg.companies);
    r.p_below.resize(cfg.companies);
    for (std::size_t i = 0; i < cfg.companies; ++i) {
        r.p_above[i] = c.psi_plus[i] / den_above;
        r.p_below[i] = c.psi_minus[i] / den_below;
    }
    assign_branches(r, cfg);
    r.warnings = validity_warnings(cfg);
    return r;
}

ExpansionResult expansion_order2(const MarketConfig& cfg, ExpansionOptions opts)
{
    validate(cfg);
    ExpansionResult r;
    r.order = 2;
    r.constants = make_constants(cfg, opts.sums);
    const auto& c = r.constants;
    const RankingSchedule ranking(cfg.companies);

    const double K = static_cast<double>(cfg.companies);
    const double a = cfg.alpha;
    const double b = cfg.beta;
    const double g = cfg.gamma;

    // Pieces shared by both solutions.
    const double occupancy = (K + b) / (a * c.B);
    const double quadratic = b * b / (2.0 * K * K) * (1.0 + occupancy * occupancy);
    const double tail = c.B + g * g * c.log_sq_sum / 2.0 -
                        (b * g / (a * c.B)) * (g * c.log_sq_sum + (K + b) * c.log_sum / K);

    r.p_above.resize(cfg.companies);
    r.p_below.resize(cfg.companies);
    for (std::size_t k = 1; k <= cfg.companies; ++k) {
        const double l = ranking.log_epsilon(k);
        const double curvature = g * g / 2.0 * l * l;
        const double psi_p = c.psi_plus[k - 1];
        const double psi_m = c.psi_minus[k - 1];

        const double num_p = psi_p + curvature + quadratic;
        const double num_m = psi_m + curvature + quadratic;
        const double den_p = checked_denominator(b * (psi_p - 1.0) / a + tail, "second-order (above)");
        const double den_m = checked_denominator(b * (psi_m + 1.0) / a + tail, "second-order (below)");
        r.p_above[k - 1] = num_p / den_p;
        r.p_below[k - 1] = num_m / den_m;
    }
    assign_branches(r, cfg);
    r.warnings = validity_warnings(cfg);
    return r;
}

AcceptanceProfile acceptance_profile(const ExpansionResult& expansion, const MarketConfig& cfg)
{
    if (expansion.order < 1) {
        throw std::invalid_argument("acceptance_profile needs an expansion of order >= 1");
    }
    if (expansion.branch.size() != cfg.companies) {
        throw std::invalid_argument("acceptance_profile: expansion and config disagree on K");
    }
    const double kink = cfg.alpha / static_cast<double>(cfg.companies);
    AcceptanceProfile profile;
    profile.crossing_k = expansion.crossing_k;
    profile.phi.resize(cfg.companies);
    for (std::size_t i = 0; i < cfg.companies; ++i) {
        const double phi = expansion.branch[i] == Branch::below ? expansion.p_below[i] : kink;
        profile.phi[i] = std::clamp(phi, 0.0, 1.0);
    }
    return profile;
}

double elementary_symmetric(std::span<const double> x, std::size_t degree)
{
    if (degree > x.size()) {
        return 0.0;
    }
    std::vector<double> e(degree + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t top = std::min(degree, i + 1);
        for (std::size_t j = top; j >= 1; --j) {
            e[j] += x[i] * e[j - 1];
        }
    }
    return e[degree];
}

double analytic_unemployment(std::span<const double> phi, std::size_t sheets, Normalization norm)
{
    const std::size_t K = phi.size();
    if (sheets < 1 || sheets > K) {
        throw std::invalid_argument("analytic_unemployment needs 1 <= a <= K");
    }
    std::vector<double> miss(K);
    std::transform(phi.begin(), phi.end(), miss.begin(), [](double p) { return 1.0 - p; });

    double denom = 1.0;
    for (std::size_t j = 0; j < sheets; ++j) {
        denom *= norm == Normalization::falling_factorial ? static_cast<double>(K - j) : static_cast<double>(j + 1);
    }
    return elementary_symmetric(miss, sheets) / denom;
}

}  // namespace labmkt
