#pragma once

#include "labmkt/config.hpp"
#include "labmkt/market.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace labmkt {

/// Identifies the random streams of one simulated business year.
struct YearKey {
    std::uint64_t seed = 0;
    std::uint64_t year = 0;
};

/// Entry sheets of one year. Every student posts exactly
/// `per_student` sheets to distinct companies.
struct Applications {
    std::size_t students = 0;
    std::size_t per_student = 0;
    std::vector<std::uint32_t> choices;       // row-major, 1-based company ids
    std::vector<std::int64_t> sheet_counts;   // v_k, entry k - 1

    std::span<const std::uint32_t> of(std::size_t student) const
    {
        return std::span(choices).subspan(student * per_student, per_student);
    }
};

/// Informal acceptances s_ik, stored per student (CSR, company ids ascending).
struct Acceptances {
    std::vector<std::size_t> offsets;         // size N + 1
    std::vector<std::uint32_t> companies;
    std::vector<std::int64_t> per_company;    // acceptances issued by company k, entry k - 1

    std::size_t students() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const std::uint32_t> of(std::size_t student) const
    {
        return std::span(companies).subspan(offsets[student], offsets[student + 1] - offsets[student]);
    }
};

struct Hiring {
    std::vector<std::int64_t> hires;          // m_k, entry k - 1
    std::vector<std::uint32_t> employer;      // per student; 0 means unemployed
    std::int64_t employed = 0;
};

struct Observables {
    double unemployment = 0.0;   // U
    double job_supply = 0.0;     // Omega
};

struct MicroOutcome {
    std::size_t year = 0;
    std::uint64_t seed = 0;
    std::vector<double> probabilities;        // P_k used for posting
    std::vector<std::int64_t> sheet_counts;   // v_k
    Acceptances acceptances;
    std::vector<std::int64_t> hires;          // m_k
    std::int64_t sum_hires = 0;
    double unemployment = 0.0;
    double job_supply = 0.0;
};

/// Each student draws cfg.sheets_per_student distinct companies by sequential
/// draws from p without replacement, renormalizing after each draw.
Applications post_sheets(const ProbabilityVector& p, const MarketConfig& cfg, YearKey key);

/// Company k accepts all applicants when v_k <= quota, otherwise exactly
/// `quota` of them chosen uniformly without replacement.
Acceptances acceptance_lottery(const Applications& apps, std::int64_t quota, YearKey key);

/// Students with at least one acceptance join the accepted company with the
/// highest epsilon.
Hiring resolve_choices(const Acceptances& acceptances, const RankingSchedule& ranking);

/// Omega = 1 - sum(m)/V and U = 1 - sum(m)/N with the microscopic quota,
/// so U = alpha Omega + 1 - alpha with alpha = V/N.
Observables observables(std::span<const std::int64_t> hires, const MarketConfig& cfg);

/// Simulates `years` successive business years. Year 0 posts with uniform P;
/// later years use Gibbs weights of the previous year's local mismatch.
/// With keep_acceptances false the per-student acceptance sets are dropped
/// from the returned outcomes to save memory.
std::vector<MicroOutcome> run_market(const MarketConfig& cfg, std::size_t years, bool keep_acceptances = true);

/// run_market once per seed (cfg.seed replaced), evaluated concurrently.
std::vector<std::vector<MicroOutcome>> run_batch(const MarketConfig& cfg, std::size_t years,
                                                 std::span<const std::uint64_t> seeds,
                                                 bool keep_acceptances = false);

}  // namespace labmkt
