#include "labmkt/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace labmkt {

RankingSchedule::RankingSchedule(std::size_t companies)
    : epsilon_(companies)
    , log_epsilon_(companies)
{
    if (companies < 1) {
        throw std::invalid_argument("RankingSchedule: need at least one company");
    }
    const double K = static_cast<double>(companies);
    for (std::size_t k = 1; k <= companies; ++k) {
        const double x = static_cast<double>(k) / K;
        epsilon_[k - 1] = 1.0 + x;
        log_epsilon_[k - 1] = std::log1p(x);
    }
}

ProbabilityVector::ProbabilityVector(std::vector<double> p)
    : p_(std::move(p))
{
    if (p_.empty()) {
        throw std::invalid_argument("ProbabilityVector: empty");
    }
    for (const double x : p_) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument("ProbabilityVector: entry outside [0, 1]: " + format_double(x));
        }
    }
    const double sum = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::invalid_argument("ProbabilityVector: entries sum to " + format_double(sum));
    }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t companies)
{
    return ProbabilityVector(std::vector<double>(companies, 1.0 / static_cast<double>(companies)));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_abs_diff: size mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

double local_mismatch(double sheets, double quota, double total_quota)
{
    return std::abs(quota - sheets) / total_quota;
}

double energy(std::size_t k, double h_prev, const MarketConfig& cfg)
{
    const double x = static_cast<double>(k) / static_cast<double>(cfg.companies);
    return -cfg.gamma * std::log1p(x) + cfg.beta * h_prev;
}

ProbabilityVector boltzmann_weights(std::span<const double> energies)
{
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(energies.size());
    double z = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        w[i] = std::exp(-(energies[i] - e_min));
        z += w[i];
    }
    for (double& x : w) {
        x /= z;
    }
    return ProbabilityVector(std::move(w));
}

ProbabilityVector gibbs_weights(std::span<const double> h_prev, const MarketConfig& cfg)
{
    if (h_prev.size() != cfg.companies) {
        throw std::invalid_argument("gibbs_weights: expected " + std::to_string(cfg.companies) +
                                    " mismatch values, got " + std::to_string(h_prev.size()));
    }
    std::vector<double> e(h_prev.size());
    for (std::size_t k = 1; k <= e.size(); ++k) {
        e[k - 1] = energy(k, h_prev[k - 1], cfg);
    }
    return boltzmann_weights(e);
}

}  // namespace labmkt
