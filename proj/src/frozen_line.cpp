#include "labmkt/frozen_line.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace labmkt {

namespace {

double frozen_ratio(double beta, double gamma, double alpha)
{
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("reversal condition needs gamma > 0");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("reversal condition needs alpha > 0");
    }
    if (!(beta >= 0.0)) {
        throw std::invalid_argument("reversal condition needs beta >= 0");
    }
    return beta / (gamma * alpha);
}

}  // namespace

double reversal_lhs(std::size_t companies, std::size_t m)
{
    if (companies < 2 || m < 1 || m > companies - 1) {
        throw std::invalid_argument("reversal condition needs 1 <= m <= K - 1, got m = " + std::to_string(m));
    }
    const double two_k = 2.0 * static_cast<double>(companies);
    return std::log(two_k / (two_k - static_cast<double>(m)));
}

bool reversal_condition(std::size_t companies, std::size_t m, double beta, double gamma, double alpha)
{
    const double ratio = frozen_ratio(beta, gamma, alpha);
    return reversal_lhs(companies, m) > ratio;
}

FrozenLineReport frozen_line(std::size_t companies, double beta, double gamma, double alpha)
{
    if (companies < 2) {
        throw std::invalid_argument("frozen line needs K >= 2");
    }
    FrozenLineReport report;
    report.companies = companies;
    report.ratio = frozen_ratio(beta, gamma, alpha);
    report.m_star = 2.0 * static_cast<double>(companies) * -std::expm1(-report.ratio);

    for (std::size_t m = 1; m < companies; ++m) {
        FrozenLineRow row;
        row.m = m;
        row.lhs = reversal_lhs(companies, m);
        row.ratio = report.ratio;
        row.frozen = !(row.lhs > report.ratio);
        (row.frozen ? report.frozen_set : report.reversible_set).push_back(m);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace labmkt
