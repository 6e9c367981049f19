#pragma once

#include <cstddef>
#include <vector>

namespace labmkt {

/// True when the order between the top company K and company K - m can flip
/// between two successive years: log(2K / (2K - m)) > beta / (gamma alpha).
/// Requires 1 <= m <= K - 1, gamma > 0 and alpha > 0.
bool reversal_condition(std::size_t companies, std::size_t m, double beta, double gamma, double alpha);

/// log(2K / (2K - m)), the left side of the reversal condition.
double reversal_lhs(std::size_t companies, std::size_t m);

struct FrozenLineRow {
    std::size_t m = 0;
    double lhs = 0.0;
    double ratio = 0.0;
    bool frozen = false;
};

struct FrozenLineReport {
    std::size_t companies = 0;
    double ratio = 0.0;   // beta / (gamma alpha)
    double m_star = 0.0;  // real crossing 2K (1 - exp(-ratio)); beyond K - 1 means nothing is reversible
    std::vector<std::size_t> frozen_set;
    std::vector<std::size_t> reversible_set;
    std::vector<FrozenLineRow> rows;  // m = 1..K-1, both curves for plotting
};

FrozenLineReport frozen_line(std::size_t companies, double beta, double gamma, double alpha);

}  // namespace labmkt
