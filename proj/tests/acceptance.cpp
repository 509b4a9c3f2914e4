// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Budgets are wall-clock caps; the numeric gates are the contract.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "enumeration_oracles.hpp"
#include "rw2d/experiments.hpp"
#include "rw2d/histories.hpp"
#include "rw2d/potential.hpp"
#include "rw2d/stats.hpp"

using namespace rw2d;

namespace {

constexpr std::uint64_t kSeed = 7;
int g_failures = 0;

struct Gate {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

void run_criterion(int number, const std::string& label, double budget_seconds,
                   const std::function<void(Gate&)>& body) {
    Gate gate;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(gate);
    } catch (const std::exception& e) {
        gate.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    gate.require(secs <= budget_seconds, "over budget");
    std::printf("[%s] %02d %s (%.1f s)%s%s\n", gate.ok ? "PASS" : "FAIL", number, label.c_str(),
                secs, gate.detail.empty() ? "" : " -- ", gate.detail.c_str());
    std::fflush(stdout);
    if (!gate.ok) ++g_failures;
}

const CheckRecord& find_check(const ExperimentReport& rep, const std::string& id) {
    for (const auto& c : rep.checks)
        if (c.id == id) return c;
    throw std::runtime_error("missing check: " + id);
}

} // namespace

int main() {
    std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(kSeed));

    run_criterion(1, "green-exactness", 1.0, [](Gate& g) {
        const GreenTable two = green({{0, 0}, {1, 0}}, 1e-10);
        g.require(std::fabs(two.value({0, 0}, {0, 0}) - 16.0 / 15.0) <= 1e-10, "G(0,0) != 16/15");
        g.require(std::fabs(two.value({0, 0}, {1, 0}) - 4.0 / 15.0) <= 1e-10, "G(0,e1) != 4/15");
        const GreenTable ten = green(disk_points(DiskSpec({0, 0}, 10.0)), 1e-10);
        g.require(ten.residual <= 1e-10, "residual");
        g.require(ten.symmetry_defect <= 1e-10, "symmetry");
    });

    run_criterion(2, "green-asymptotics", 120.0, [](Gate& g) {
        const PotentialConstants pc = green_asymptotics({25.0, 50.0, 100.0, 200.0});
        const double two_over_pi = 2.0 / M_PI;
        g.require(std::fabs(pc.slope_hat - two_over_pi) <= 0.02 * two_over_pi, "slope off 2/pi");
        std::vector<double> lr;
        for (const double R : pc.radii) lr.push_back(std::log(R));
        const LinearFit lo =
            linear_fit(std::span(lr).subspan(0, 3), std::span(pc.g00).subspan(0, 3));
        const LinearFit hi = linear_fit(std::span(lr).subspan(1), std::span(pc.g00).subspan(1));
        g.require(std::fabs(lo.intercept - hi.intercept) <= 0.02, "intercept unstable");
    });

    run_criterion(3, "annulus-formulas", 120.0, [](Gate& g) {
        const AnnulusCrossing ac = annulus_crossing({30, 0}, 10.0, 100.0);
        g.require(std::fabs(ac.p_exit_outer - std::log(3.0) / std::log(10.0)) <= 0.02,
                  "log-ratio gap");
        g.require(std::fabs(ac.p_exit_outer + ac.p_hit_inner - 1.0) <= 1e-9, "complement");
        const HalfStep hs = annulus_half_step(50.0, 4.0);
        g.require(std::fabs(hs.p_up - 0.5) <= 0.02, "half crossing off 1/2");
    });

    run_criterion(4, "harnack-uniformity", 300.0, [](Gate& g) {
        std::vector<double> ratios;
        for (const double eps : {0.3, 0.2, 0.1})
            ratios.push_back(harnack_ratio(60.0, eps, 20).max_ratio);
        g.require(ratios[2] <= 1.5, "ratio over 1 + 5 eps");
        g.require(ratios[0] > ratios[1] && ratios[1] > ratios[2], "not monotone in eps");
    });

    run_criterion(5, "local-time-law", 300.0, [](Gate& g) {
        const ExperimentReport rep = local_time_suite(LocalTimeSuiteConfig{}, kSeed);
        for (const auto& c : rep.checks) g.require(c.pass, c.id);
    });

    run_criterion(6, "history-combinatorics", 120.0, [](Gate& g) {
        // Exact counts vs path enumeration, entries <= 3, n <= 5.
        for (int n = 2; n <= 5; ++n) {
            std::vector<std::int64_t> m(static_cast<std::size_t>(n - 1), 0);
            const auto cells = static_cast<std::size_t>(std::pow(4.0, n - 1));
            for (std::size_t code = 0; code < cells; ++code) {
                std::size_t c = code;
                for (auto& v : m) {
                    v = static_cast<std::int64_t>(c % 4);
                    c /= 4;
                }
                if (history_count({n, m}).to_decimal() !=
                    std::to_string(oracles::count_paths(n, m))) {
                    g.require(false, "count mismatch");
                    return;
                }
            }
        }
        // Total probability, exact in dyadic rationals.
        for (int n = 2; n <= 4; ++n) {
            const int steps = 41;
            Dyadic sum;
            std::vector<std::int64_t> m(static_cast<std::size_t>(n - 1), 0);
            std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos,
                                                                     std::int64_t left) {
                if (pos == m.size()) {
                    const HistoryVector h{n, m};
                    const BigUint cnt = history_count(h);
                    if (!cnt.is_zero()) sum += history_probability_dyadic(h) * Dyadic(cnt, 0);
                    return;
                }
                for (std::int64_t v = 0; v <= left; ++v) {
                    m[pos] = v;
                    rec(pos + 1, left - v);
                }
            };
            rec(0, (steps - 1) / 2);
            sum.normalize();
            g.require(sum == oracles::absorbed_mass(n, steps), "dyadic mass identity");
        }
        // Level-chain Monte Carlo vs the exact pmf, 3 sigma per cell.
        Rng rng(kSeed, 600);
        const std::size_t samples = 1000000;
        std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> freq;
        for (std::size_t i = 0; i < samples; ++i) {
            const ChainSample s = level_chain_sample(3, rng);
            g.require(!s.truncated, "chain truncated");
            ++freq[{s.history.m[0], s.history.m[1]}];
        }
        for (std::int64_t m2 = 0; m2 <= 12; ++m2)
            for (std::int64_t m3 = 0; m3 <= 12; ++m3) {
                const HistoryVector h{3, {m2, m3}};
                const double p = history_count(h).to_double() * history_probability(h);
                const double expect = p * static_cast<double>(samples);
                if (expect < 25.0) continue;
                const auto it = freq.find({m2, m3});
                const double obs = it == freq.end() ? 0.0 : static_cast<double>(it->second);
                if (std::fabs(obs - expect) > 3.0 * std::sqrt(expect * (1.0 - p)))
                    g.require(false, "chain cell off");
            }
    });

    run_criterion(7, "excursion-law", 600.0, [](Gate& g) {
        const ExperimentReport rep = excursion_law_suite(ExcursionLawConfig{}, kSeed);
        for (const auto& c : rep.checks) g.require(c.pass, c.id);
    });

    run_criterion(8, "admissible-mass-recursion", 60.0, [](Gate& g) {
        const double dp = successful_prob_dp(1.0, 6);
        const double bf = log_qn_bruteforce(1.0, 6);
        g.require(std::fabs(dp - bf) / std::fabs(bf) <= 1e-12, "dp vs enumeration");

        // Decay exponent of the admissible mass at a = 0.5, against the
        // two stated scales: a log r_{n,0} (band and trend) and
        // 3a log n! (trend only; its error sequence decays like
        // log log n / log n and still sits near 0.84 at n = 30).
        std::vector<double> ratio_r0, ratio_fact;
        for (const int n : {10, 20, 30, 40}) {
            const double q = successful_prob_dp(0.5, n);
            ratio_r0.push_back(-q / (0.5 * RadiiSchedule::paper(n).log_radius(0)));
            ratio_fact.push_back(-q / (3.0 * 0.5 * std::lgamma(n + 1.0)));
        }
        g.require(ratio_r0[2] > 0.5 && ratio_r0[2] < 1.5, "ratio at n=30 outside (0.5, 1.5)");
        for (std::size_t i = 1; i < ratio_r0.size(); ++i) {
            g.require(std::fabs(ratio_r0[i] - 1.0) < std::fabs(ratio_r0[i - 1] - 1.0),
                      "radius-exponent ratio not moving toward 1");
            g.require(std::fabs(ratio_fact[i] - 1.0) < std::fabs(ratio_fact[i - 1] - 1.0),
                      "factorial-exponent ratio not moving toward 1");
        }
        // Pinned pilot values (deterministic recursion; slack for libm).
        const std::vector<double> pinned{1.458018482504, 1.281072233708, 1.228602637375,
                                         1.203289517922};
        for (std::size_t i = 0; i < pinned.size(); ++i)
            g.require(std::fabs(ratio_r0[i] - pinned[i]) <= 1e-6, "pilot fixture drift");
    });

    run_criterion(9, "analytic-utilities", 10.0, [](Gate& g) {
        g.require(std::fabs(rate_I(1.0)) <= 1e-15, "I(1)");
        const double h = 1e-4;
        g.require(std::fabs((rate_I(1.0 + h) - rate_I(1.0 - h)) / (2.0 * h)) <= 1e-7, "I'(1)");
        g.require(std::fabs((rate_I(1.0 + h) - 2.0 * rate_I(1.0) + rate_I(1.0 - h)) / (h * h) -
                            0.5) <= 1e-6,
                  "I''(1)");

        Rng rng(kSeed, 900);
        for (int i = 0; i < 20; ++i) {
            const double alpha = 0.1 + 3.0 * rng.u01();
            const double beta = alpha * (1.0 + 4.0 * rng.u01());
            const MinPhi m = min_phi(alpha, beta);
            const double numeric = oracles::golden_minimize(
                [&](double phi) { return phi * alpha - phi / (1.0 + phi) * beta; }, 0.0, 100.0);
            g.require(std::fabs(m.value - numeric) <= 1e-9, "min_phi vs search");
        }

        const double p = 0.3, c = 2.5, lambda = 0.5;
        const double bound = pz_bound(p * c, p * c * c, lambda);
        std::size_t hits = 0;
        const std::size_t n = 1000000;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.u01() < p) ++hits; // W = c 1{Bernoulli}; W >= lambda E W iff W = c
        g.require(bound <= static_cast<double>(hits) / static_cast<double>(n),
                  "PZ bound exceeds empirical mass");
    });

    run_criterion(10, "thick-point-spectrum-trend", 1800.0, [](Gate& g) {
        const ExperimentReport rep = spectrum_scan(SpectrumConfig{}, kSeed);
        g.require(find_check(rep, "count-slope").pass, "slope outside 1.5 +- 0.3");
        g.require(find_check(rep, "counts-monotone-in-a").pass, "counts not monotone");
        for (const auto& c : rep.checks) g.require(c.pass || c.censored, c.id);
    });

    run_criterion(11, "most-visited-site-trend", 1800.0, [](Gate& g) {
        const ExperimentReport rep = erdos_taylor_scan(ErdosTaylorConfig{}, kSeed);
        for (const auto& c : rep.checks) g.require(c.pass, c.id);
        g.require(find_check(rep, "limit-unverified").band.find("NOT verified") !=
                      std::string::npos,
                  "limit must be marked unverified");
    });

    run_criterion(12, "determinism-across-threads", 5400.0, [](Gate& g) {
        VerifyConfig one;
        one.threads = 1;
        VerifyConfig two;
        two.threads = 2;
        const std::string a = verify_all(kSeed, one).to_json().dump(2);
        const std::string b = verify_all(kSeed, two).to_json().dump(2);
        g.require(a == b, "reports differ across thread counts");
        g.require(!a.empty(), "empty report");
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
