#pragma once

#include "labmkt/config.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace labmkt {

/// Static company prestige epsilon_k = 1 + k/K, k = 1..K. Strictly
/// increasing, so company K is the most attractive.
class RankingSchedule {
public:
    explicit RankingSchedule(std::size_t companies);

    std::size_t size() const { return epsilon_.size(); }
    /// 1-based.
    double epsilon(std::size_t k) const { return epsilon_.at(k - 1); }
    double log_epsilon(std::size_t k) const { return log_epsilon_.at(k - 1); }
    std::span<const double> values() const { return epsilon_; }

private:
    std::vector<double> epsilon_;
    std::vector<double> log_epsilon_;
};

/// Aggregation distribution over companies for one business year.
/// Construction checks that entries lie in [0, 1] and sum to 1 within 1e-12.
class ProbabilityVector {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit ProbabilityVector(std::vector<double> p);
    static ProbabilityVector uniform(std::size_t companies);

    std::size_t size() const { return p_.size(); }
    /// 1-based company accessor.
    double company(std::size_t k) const { return p_.at(k - 1); }
    /// 0-based storage; entry i belongs to company i + 1.
    std::span<const double> values() const { return p_; }

    friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

private:
    std::vector<double> p_;
};

/// Max-norm distance between two equally sized vectors.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// h_k = |v_star - v_k| / V.
double local_mismatch(double sheets, double quota, double total_quota);

/// E_k = -gamma log(1 + k/K) + beta h_prev, with k 1-based.
double energy(std::size_t k, double h_prev, const MarketConfig& cfg);

/// Normalized exp(-E_k). The minimum energy is subtracted before
/// exponentiation, so very large gamma or beta cannot overflow.
ProbabilityVector boltzmann_weights(std::span<const double> energies);

/// Gibbs choice probabilities given last year's local mismatch h_k
/// (entry i is company i + 1).
ProbabilityVector gibbs_weights(std::span<const double> h_prev, const MarketConfig& cfg);

}  // namespace labmkt
