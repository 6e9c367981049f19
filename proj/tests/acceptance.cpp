// Acceptance checks. Prints one PASS/FAIL line per criterion; with a criterion
// number as argument only that one runs. Exit status is non-zero when any
// selected criterion fails.

#include "labmkt/frozen_line.hpp"
#include "labmkt/hightemp.hpp"
#include "labmkt/meanfield.hpp"
#include "labmkt/microsim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace labmkt;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

MarketConfig market(std::size_t K, std::size_t N, double alpha, double beta, double gamma, std::size_t a = 3)
{
    MarketConfig cfg;
    cfg.companies = K;
    cfg.students = N;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.gamma = gamma;
    cfg.sheets_per_student = a;
    return cfg;
}

double sum_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

// 1. Map normalization and determinism over random configurations.
Outcome normalization()
{
    constexpr double kSumTol = 1e-12;
    constexpr double kTimeLimit = 10.0;
    constexpr std::size_t kSteps = 100;
    Timer timer;
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> strength(0.0, 100.0);
    std::uniform_real_distribution<double> ratio(0.2, 2.0);
    std::uniform_int_distribution<std::size_t> companies(2, 200);

    double worst = 0.0;
    std::size_t mismatched = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        MarketConfig cfg = market(companies(gen), 1000, ratio(gen), strength(gen), strength(gen));
        cfg.sheets_per_student = 1;
        std::vector<ProbabilityVector> runs;
        for (int rep = 0; rep < 2; ++rep) {
            ProbabilityVector p = ProbabilityVector::uniform(cfg.companies);
            for (std::size_t t = 0; t < kSteps; ++t) {
                p = map_step(p, cfg);
                worst = std::max(worst, std::abs(sum_of(p.values()) - 1.0));
            }
            runs.push_back(p);
        }
        if (!(runs[0] == runs[1])) {
            ++mismatched;
        }
    }
    const double elapsed = timer.seconds();
    std::ostringstream d;
    d << "1000 configs x " << kSteps << " steps, max |sum-1| = " << worst << " (tol " << kSumTol
      << "), non-identical reruns = " << mismatched << ", " << elapsed << " s (limit " << kTimeLimit << ")";
    return {worst <= kSumTol && mismatched == 0 && elapsed < kTimeLimit, d.str()};
}

// 2. U = alpha Omega + 1 - alpha on every micro realization.
Outcome identity()
{
    constexpr double kTol = 1e-12;
    constexpr double kTimeLimit = 30.0;
    Timer timer;
    const double alphas[] = {0.5, 1.0, 1.5};
    const std::size_t sheets[] = {1, 3};
    std::size_t realizations = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; realizations < 100; ++seed) {
        for (const double alpha : alphas) {
            for (const std::size_t a : sheets) {
                MarketConfig cfg = market(50, 10000, alpha, 1.0, 1.0, a);
                cfg.seed = seed;
                const double am = cfg.micro_alpha();
                for (const auto& y : run_market(cfg, 3, false)) {
                    worst = std::max(worst, std::abs(y.unemployment - (am * y.job_supply + 1.0 - am)));
                    ++realizations;
                }
            }
        }
    }
    const double elapsed = timer.seconds();
    std::ostringstream d;
    d << realizations << " realizations, max |U - (alpha Omega + 1 - alpha)| = " << worst << " (tol " << kTol
      << "), " << elapsed << " s (limit " << kTimeLimit << ")";
    return {worst <= kTol && elapsed < kTimeLimit, d.str()};
}

// 3. Frozen line at K = 50, beta / (gamma alpha) = 0.5.
Outcome frozen()
{
    const auto r = frozen_line(50, 0.5, 1.0, 1.0);
    const double expected = 100.0 * (1.0 - std::exp(-0.5));
    std::vector<std::size_t> want(39);
    std::iota(want.begin(), want.end(), 1);
    std::ostringstream d;
    d.precision(15);
    d << "m* = " << r.m_star << " (expected " << expected << "), frozen = {" << r.frozen_set.front() << ".."
      << r.frozen_set.back() << "} (" << r.frozen_set.size() << " companies)";
    return {r.m_star == expected && r.frozen_set == want, d.str()};
}

// 4. Convergence for gamma = 1, beta = 0; oscillation for beta / gamma >= 10.
Outcome regimes()
{
    std::ostringstream d;
    const Trajectory calm = iterate(market(50, 5000, 1.0, 0.0, 1.0));
    const bool calm_ok = calm.verdict == Verdict::fixed_point && calm.iterations_run <= 5;
    d << "gamma=1,beta=0: " << to_string(calm.verdict) << " after " << calm.iterations_run << " steps;";

    std::size_t oscillating = 0;
    std::size_t total = 0;
    for (const double gamma : {0.5, 1.0, 2.0, 3.0}) {
        for (const double r : {10.0, 20.0, 50.0}) {
            const Trajectory t = iterate(market(50, 5000, 1.0, r * gamma, gamma));
            ++total;
            if (t.verdict == Verdict::oscillation) {
                ++oscillating;
            }
            d << " (g=" << gamma << ",b=" << r * gamma << "): " << to_string(t.verdict);
            if (t.period) {
                d << "/" << *t.period;
            }
            else if (t.verdict == Verdict::fixed_point) {
                d << "@" << t.iterations_run;
            }
            d << ";";
        }
    }
    d << " oscillation in " << oscillating << "/" << total;
    return {calm_ok && oscillating == total, d.str()};
}

// 5. Business-failure transition along gamma.
Outcome failure_transition()
{
    constexpr double kTimeLimit = 120.0;
    constexpr double kPublished = 10.3;
    Timer timer;
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) {
        grid.push_back(0.5 * i);
    }
    bool all_found = true;
    bool all_monotone = true;
    bool in_band = false;
    std::ostringstream d;
    for (const double beta : {0.1, 1.0, 5.0}) {
        const auto r = critical_gamma_scan(market(50, 5000, 1.0, beta, 0.0), grid);
        bool monotone = true;
        for (std::size_t i = 1; i < r.table.size(); ++i) {
            monotone = monotone && r.table[i].steady_p1 <= r.table[i - 1].steady_p1;
        }
        all_monotone = all_monotone && monotone;
        all_found = all_found && r.gamma_c.has_value();
        d << "beta=" << beta << ": gamma_c=";
        if (r.gamma_c) {
            d << *r.gamma_c;
            in_band = in_band || (*r.gamma_c >= 7.0 && *r.gamma_c <= 14.0);
        }
        else {
            d << "none";
        }
        d << (monotone ? " monotone" : " NOT monotone") << "; ";
    }
    const double elapsed = timer.seconds();
    d << "published " << kPublished << ", band [7, 14] " << (in_band ? "hit" : "missed") << ", " << elapsed
      << " s (limit " << kTimeLimit << ")";
    return {all_found && all_monotone && in_band && elapsed < kTimeLimit, d.str()};
}

double max_err(const std::vector<double>& p, const ProbabilityVector& q)
{
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        e = std::max(e, std::abs(p[i] - q.values()[i]));
    }
    return e;
}

// Least-squares slope of log(err1 / err0) against log t.
double improvement_slope(const std::vector<double>& ts, const std::vector<double>& e0, const std::vector<double>& e1)
{
    double mx = 0.0;
    double my = 0.0;
    const double n = static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mx += std::log(ts[i]) / n;
        my += std::log(e1[i] / e0[i]) / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dx = std::log(ts[i]) - mx;
        sxy += dx * (std::log(e1[i] / e0[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

// 6. High-temperature hierarchy against the converged map.
Outcome hierarchy()
{
    constexpr double kMinSlope = 0.9;
    constexpr double kTimeLimit = 10.0;
    Timer timer;
    const std::vector<double> ts{1e-1, 1e-2, 1e-3};
    std::ostringstream d;
    bool ordered = true;
    double slope = 0.0;
    for (const SumRule rule : {SumRule::integral, SumRule::finite}) {
        std::vector<double> e0;
        std::vector<double> e1;
        std::vector<double> e2;
        for (const double t : ts) {
            const MarketConfig cfg = market(50, 5000, 1.0, t, t);
            const Trajectory fp = iterate(cfg);
            e0.push_back(max_err(expansion_order0(cfg).selected, fp.final_state()));
            e1.push_back(max_err(expansion_order1(cfg, {rule}).selected, fp.final_state()));
            e2.push_back(max_err(expansion_order2(cfg, {rule}).selected, fp.final_state()));
        }
        const double s = improvement_slope(ts, e0, e1);
        d << to_string(rule) << " sums:";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            d << " t=" << ts[i] << " e0=" << e0[i] << " e1=" << e1[i] << " e2=" << e2[i] << ";";
        }
        d << " slope=" << s;
        if (rule == SumRule::integral) {
            slope = s;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                ordered = ordered && e2[i] <= e1[i];
            }
            d << " (asserted) | ";
        }
        else {
            d << " (diagnostic)";
        }
    }
    const double elapsed = timer.seconds();
    d << " | " << elapsed << " s (limit " << kTimeLimit << ")";
    return {slope >= kMinSlope && ordered && elapsed < kTimeLimit, d.str()};
}

double subset_sum(const std::vector<double>& x, std::size_t a, std::size_t from = 0)
{
    if (a == 0) {
        return 1.0;
    }
    double s = 0.0;
    for (std::size_t i = from; i + a <= x.size(); ++i) {
        s += x[i] * subset_sum(x, a - 1, i + 1);
    }
    return s;
}

// 7. Symmetric-polynomial U against subset enumeration.
Outcome symmetric_oracle()
{
    constexpr double kRelTol = 1e-12;
    constexpr double kTimeLimit = 5.0;
    Timer timer;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t cases = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t K = 3 + gen() % 10;
        std::vector<double> phi(K);
        std::vector<double> miss(K);
        for (std::size_t i = 0; i < K; ++i) {
            phi[i] = u(gen);
            miss[i] = 1.0 - phi[i];
        }
        for (std::size_t a = 1; a <= 3; ++a) {
            double falling = 1.0;
            for (std::size_t j = 0; j < a; ++j) {
                falling *= static_cast<double>(K - j);
            }
            const double want = subset_sum(miss, a) / falling;
            const double got = analytic_unemployment(phi, a);
            worst = std::max(worst, std::abs(got - want) / std::abs(want));
            ++cases;
        }
    }
    const double elapsed = timer.seconds();
    std::ostringstream d;
    d << cases << " cases, max relative error " << worst << " (tol " << kRelTol << "), " << elapsed << " s (limit "
      << kTimeLimit << ")";
    return {worst <= kRelTol && elapsed < kTimeLimit, d.str()};
}

// 8. Analytic U against the micro simulation.
Outcome analytic_vs_montecarlo()
{
    constexpr double kSigmas = 3.0;
    constexpr std::size_t kSeeds = 20;
    constexpr std::size_t kYears = 10;
    MarketConfig cfg = market(50, 50000, 1.0, 0.05, 0.05, 3);
    std::vector<std::uint64_t> seeds(kSeeds);
    std::iota(seeds.begin(), seeds.end(), 1);
    const auto batch = run_batch(cfg, kYears, seeds);
    std::vector<double> u;
    for (const auto& run : batch) {
        u.push_back(run.back().unemployment);
    }
    const double n = static_cast<double>(u.size());
    const double mean = sum_of(u) / n;
    double var = 0.0;
    for (const double x : u) {
        var += (x - mean) * (x - mean);
    }
    const double se = std::sqrt(var / (n - 1.0) / n);

    const auto profile = acceptance_profile(expansion_order1(cfg), cfg);
    std::ostringstream d;
    d << "MC U = " << mean << " +- " << se << " (" << kSeeds << " seeds, final of " << kYears << " years);";
    bool pass = false;
    for (const Normalization norm : {Normalization::falling_factorial, Normalization::factorial}) {
        const double ua = analytic_unemployment(profile.phi, 3, norm);
        const double z = std::abs(ua - mean) / se;
        d << " " << to_string(norm) << " U = " << ua << " (" << z << " SE)";
        if (z <= kSigmas) {
            pass = true;
            d << " [agrees]";
        }
        d << ";";
    }
    d << (pass ? "" : " no normalization within 3 SE");
    return {pass, d.str()};
}

// 9. Law of large numbers for single-sheet posting.
Outcome large_numbers()
{
    constexpr std::size_t kSeeds = 100;
    constexpr double kFraction = 0.99;
    const std::size_t K = 50;
    const ProbabilityVector p = ProbabilityVector::uniform(K);
    std::ostringstream d;
    bool decreasing = true;
    bool within = true;
    double previous = INFINITY;
    for (const std::size_t N : {1000u, 10000u, 100000u}) {
        MarketConfig cfg = market(K, N, 1.0, 0.0, 0.0, 1);
        const double bound = 5.0 / std::sqrt(static_cast<double>(N));
        std::size_t inside = 0;
        double mean_dev = 0.0;
        for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
            const auto apps = post_sheets(p, cfg, {seed, 0});
            double dev = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                dev = std::max(dev, std::abs(static_cast<double>(apps.sheet_counts[k]) / static_cast<double>(N) -
                                             p.values()[k]));
            }
            mean_dev += dev / kSeeds;
            if (dev <= bound) {
                ++inside;
            }
        }
        decreasing = decreasing && mean_dev < previous;
        within = within && static_cast<double>(inside) >= kFraction * kSeeds;
        previous = mean_dev;
        d << "N=" << N << ": mean max-dev " << mean_dev << ", " << inside << "/" << kSeeds << " within " << bound
          << "; ";
    }
    return {decreasing && within, d.str()};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"map normalization and determinism", normalization},
        {"unemployment / job-supply identity", identity},
        {"frozen ranking line", frozen},
        {"convergence and oscillation regimes", regimes},
        {"business-failure transition", failure_transition},
        {"high-temperature hierarchy", hierarchy},
        {"symmetric-polynomial oracle", symmetric_oracle},
        {"analytic vs Monte Carlo unemployment", analytic_vs_montecarlo},
        {"law of large numbers", large_numbers},
    };
    std::size_t only = 0;
    if (argc > 1) {
        only = std::strtoul(argv[1], nullptr, 10);
        if (only < 1 || only > criteria.size()) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && only != i + 1) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
