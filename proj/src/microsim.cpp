#include "labmkt/microsim.hpp"

#include "labmkt/parallel.hpp"
#include "labmkt/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace labmkt {

namespace {

// One draw from the unchosen companies with probability proportional to p.
// Falls back to a uniform pick when the remaining mass has underflowed to 0.
std::uint32_t draw_unchosen(std::span<const double> p, const std::vector<char>& chosen, StreamRng& rng)
{
    double mass = 0.0;
    std::size_t open = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!chosen[i]) {
            mass += p[i];
            ++open;
        }
    }
    if (!(mass > 0.0)) {
        std::uint64_t pick = rng.below(open);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!chosen[i] && pick-- == 0) {
                return static_cast<std::uint32_t>(i + 1);
            }
        }
    }

    const double target = rng.uniform01() * mass;
    double acc = 0.0;
    std::size_t last_positive = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (chosen[i] || p[i] <= 0.0) {
            continue;
        }
        acc += p[i];
        last_positive = i;
        if (target < acc) {
            return static_cast<std::uint32_t>(i + 1);
        }
    }
    // Rounding left target at the very top of the mass.
    return static_cast<std::uint32_t>(last_positive + 1);
}

}  // namespace

Applications post_sheets(const ProbabilityVector& p, const MarketConfig& cfg, YearKey key)
{
    if (p.size() != cfg.companies) {
        throw std::invalid_argument("post_sheets: probability vector has wrong length");
    }
    if (cfg.sheets_per_student > cfg.companies) {
        throw ConfigError("a (sheets per student) must not exceed K");
    }

    Applications apps;
    apps.students = cfg.students;
    apps.per_student = cfg.sheets_per_student;
    apps.choices.resize(apps.students * apps.per_student);
    apps.sheet_counts.assign(cfg.companies, 0);

    const auto probs = p.values();
    std::vector<char> chosen(cfg.companies, 0);
    for (std::size_t i = 0; i < apps.students; ++i) {
        StreamRng rng(key.seed, key.year, StreamDomain::posting, i);
        std::fill(chosen.begin(), chosen.end(), 0);
        for (std::size_t j = 0; j < apps.per_student; ++j) {
            const std::uint32_t k = draw_unchosen(probs, chosen, rng);
            chosen[k - 1] = 1;
            apps.choices[i * apps.per_student + j] = k;
            ++apps.sheet_counts[k - 1];
        }
    }
    return apps;
}

Acceptances acceptance_lottery(const Applications& apps, std::int64_t quota, YearKey key)
{
    if (quota < 0) {
        throw std::invalid_argument("acceptance_lottery: negative quota");
    }
    const std::size_t K = apps.sheet_counts.size();
    std::vector<std::vector<std::uint32_t>> applicants(K);
    for (std::size_t k = 0; k < K; ++k) {
        applicants[k].reserve(static_cast<std::size_t>(apps.sheet_counts[k]));
    }
    for (std::size_t i = 0; i < apps.students; ++i) {
        for (const std::uint32_t k : apps.of(i)) {
            applicants[k - 1].push_back(static_cast<std::uint32_t>(i));
        }
    }

    Acceptances acc;
    acc.per_company.assign(K, 0);
    std::vector<std::size_t> count(apps.students, 0);
    for (std::size_t k = 0; k < K; ++k) {
        auto& pool = applicants[k];
        const auto v = static_cast<std::int64_t>(pool.size());
        if (v > quota) {
            // Partial Fisher-Yates: the first `quota` slots become a uniform sample.
            StreamRng rng(key.seed, key.year, StreamDomain::lottery, k + 1);
            for (std::int64_t j = 0; j < quota; ++j) {
                const auto r = j + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(v - j)));
                std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(r)]);
            }
            pool.resize(static_cast<std::size_t>(quota));
        }
        acc.per_company[k] = static_cast<std::int64_t>(pool.size());
        for (const std::uint32_t i : pool) {
            ++count[i];
        }
    }

    acc.offsets.assign(apps.students + 1, 0);
    for (std::size_t i = 0; i < apps.students; ++i) {
        acc.offsets[i + 1] = acc.offsets[i] + count[i];
    }
    acc.companies.resize(acc.offsets.back());
    std::vector<std::size_t> cursor(acc.offsets.begin(), acc.offsets.end() - 1);
    // Companies are visited in increasing k, so each student's list is sorted.
    for (std::size_t k = 0; k < K; ++k) {
        for (const std::uint32_t i : applicants[k]) {
            acc.companies[cursor[i]++] = static_cast<std::uint32_t>(k + 1);
        }
    }
    return acc;
}

Hiring resolve_choices(const Acceptances& acceptances, const RankingSchedule& ranking)
{
    Hiring hiring;
    hiring.hires.assign(ranking.size(), 0);
    hiring.employer.assign(acceptances.students(), 0);
    for (std::size_t i = 0; i < acceptances.students(); ++i) {
        const auto offers = acceptances.of(i);
        if (offers.empty()) {
            continue;
        }
        const std::uint32_t best = *std::max_element(offers.begin(), offers.end(), [&](auto a, auto b) {
            return ranking.epsilon(a) < ranking.epsilon(b);
        });
        hiring.employer[i] = best;
        ++hiring.hires[best - 1];
        ++hiring.employed;
    }
    return hiring;
}

Observables observables(std::span<const std::int64_t> hires, const MarketConfig& cfg)
{
    const auto total = std::accumulate(hires.begin(), hires.end(), std::int64_t{0});
    const double V = static_cast<double>(cfg.micro_total_quota());
    const double N = static_cast<double>(cfg.students);
    Observables obs;
    obs.job_supply = 1.0 - static_cast<double>(total) / V;
    obs.unemployment = 1.0 - static_cast<double>(total) / N;
    return obs;
}

std::vector<MicroOutcome> run_market(const MarketConfig& cfg, std::size_t years, bool keep_acceptances)
{
    validate(cfg);
    if (years < 1) {
        throw std::invalid_argument("run_market: need at least one year");
    }
    const std::int64_t quota = cfg.micro_quota();
    if (quota < 1) {
        throw ConfigError("alpha * N / K rounds to a zero quota; increase N or alpha");
    }
    const double V = static_cast<double>(cfg.micro_total_quota());
    const RankingSchedule ranking(cfg.companies);

    std::vector<MicroOutcome> outcomes;
    outcomes.reserve(years);
    std::vector<double> h(cfg.companies, 0.0);
    for (std::size_t t = 0; t < years; ++t) {
        const ProbabilityVector p = t == 0 ? ProbabilityVector::uniform(cfg.companies) : gibbs_weights(h, cfg);
        const YearKey key{cfg.seed, t};

        const Applications apps = post_sheets(p, cfg, key);
        Acceptances acc = acceptance_lottery(apps, quota, key);
        const Hiring hiring = resolve_choices(acc, ranking);
        const Observables obs = observables(hiring.hires, cfg);

        for (std::size_t k = 0; k < cfg.companies; ++k) {
            h[k] = local_mismatch(static_cast<double>(apps.sheet_counts[k]), static_cast<double>(quota), V);
        }

        MicroOutcome out;
        out.year = t;
        out.seed = cfg.seed;
        out.probabilities.assign(p.values().begin(), p.values().end());
        out.sheet_counts = apps.sheet_counts;
        if (keep_acceptances) {
            out.acceptances = std::move(acc);
        }
        out.hires = hiring.hires;
        out.sum_hires = hiring.employed;
        out.unemployment = obs.unemployment;
        out.job_supply = obs.job_supply;
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

std::vector<std::vector<MicroOutcome>> run_batch(const MarketConfig& cfg, std::size_t years,
                                                 std::span<const std::uint64_t> seeds, bool keep_acceptances)
{
    return parallel_map(seeds.size(), [&](std::size_t r) {
        MarketConfig c = cfg;
        c.seed = seeds[r];
        return run_market(c, years, keep_acceptances);
    });
}

}  // namespace labmkt
