#include "rw2d/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <thread>

#include "rw2d/excursion.hpp"
#include "rw2d/histories.hpp"
#include "rw2d/localtime.hpp"
#include "rw2d/potential.hpp"
#include "rw2d/stats.hpp"
#include "rw2d/walk.hpp"

namespace rw2d {

namespace {

constexpr double kTwoOverPi = 2.0 / M_PI;

// Per-suite stream salts keep trial streams disjoint across suites.
constexpr std::uint64_t kSaltLocalTime = 0x6c74696d65ULL;
constexpr std::uint64_t kSaltExcursion = 0x657863ULL;
constexpr std::uint64_t kSaltErdosTaylor = 0x6574ULL;
constexpr std::uint64_t kSaltSpectrum = 0x7370ULL;
constexpr std::uint64_t kSaltSuccessful = 0x7375ULL;
constexpr std::uint64_t kSaltDecoupling = 0x6463ULL;

Rng make_stream(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
    return Rng(seed ^ (salt * 0x9E3779B97F4A7C15ULL), index);
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel map: slot i always holds fn(i), whatever the
// thread count; reductions then run sequentially over the slots.
template <class T, class F>
std::vector<T> run_indexed(std::size_t count, int threads, F&& fn) {
    std::vector<T> out(count);
    const int nt = std::min<int>(effective_threads(threads),
                                 static_cast<int>(std::max<std::size_t>(count, 1)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load(std::memory_order_relaxed)) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::scoped_lock lk(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// potential_suite
// ---------------------------------------------------------------------------

ExperimentReport potential_suite(const PotentialSuiteConfig& cfg, std::uint64_t seed) {
    if (!(cfg.annulus_r > 0.0) || !(cfg.annulus_R > cfg.annulus_r))
        throw std::invalid_argument("potential_suite: need 0 < r < R");

    ExperimentReport rep;
    rep.name = "potential";
    rep.master_seed = seed;
    rep.parameters = {{"annulus_r", cfg.annulus_r},
                      {"annulus_R", cfg.annulus_R},
                      {"annulus_x", {cfg.annulus_x.x, cfg.annulus_x.y}},
                      {"hit_R", cfg.hit_R},
                      {"hit_x", {cfg.hit_x.x, cfg.hit_x.y}},
                      {"asym_radii", cfg.asym_radii},
                      {"half_mid", cfg.half_mid},
                      {"half_rho", cfg.half_rho},
                      {"half_trend_mids", cfg.half_trend_mids},
                      {"harnack_R", cfg.harnack_R},
                      {"harnack_eps", cfg.harnack_eps},
                      {"harnack_probes", cfg.harnack_probes}};

    // Two-point domain, solvable by hand: G(0,0) = 16/15, G(0,e1) = 4/15.
    {
        const GreenTable gt = green({{0, 0}, {1, 0}}, 1e-10);
        const double d = std::max(std::fabs(gt.value({0, 0}, {0, 0}) - 16.0 / 15.0),
                                  std::fabs(gt.value({0, 0}, {1, 0}) - 4.0 / 15.0));
        rep.add("green-two-point", "expected visit counts on a two-point domain", "analytic", d,
                "<= 1e-10", d <= 1e-10);
    }
    {
        const GreenTable gt = green(disk_points(DiskSpec({0, 0}, 10.0)), 1e-10);
        const double d = std::max(gt.residual, gt.symmetry_defect);
        rep.add("green-defining-relation", "visit counts solve the one-step balance equation",
                "analytic", d, "<= 1e-10", d <= 1e-10);
    }

    // G(0,0) grows like (2/pi) log R with a stable intercept.
    PotentialConstants pc;
    {
        pc = green_asymptotics(cfg.asym_radii);
        const double rel = std::fabs(pc.slope_hat - kTwoOverPi) / kTwoOverPi;
        rep.add("green-log-slope", "log growth coefficient of the center visit count", "analytic",
                pc.slope_hat, fmt("within 2%% of %.6f", kTwoOverPi), rel <= 0.02);

        std::vector<double> lr;
        for (const double R : pc.radii) lr.push_back(std::log(R));
        const std::size_t k = pc.radii.size();
        const LinearFit lo = linear_fit(std::span(lr).subspan(0, k - 1),
                                        std::span(pc.g00).subspan(0, k - 1));
        const LinearFit hi = linear_fit(std::span(lr).subspan(1), std::span(pc.g00).subspan(1));
        const double drift = std::fabs(lo.intercept - hi.intercept);
        rep.add("green-intercept-stability", "fitted intercept across fit windows", "analytic",
                drift, "<= 0.02", drift <= 0.02);

        bool increasing = true;
        for (std::size_t i = 1; i < pc.g00.size(); ++i)
            if (pc.g00[i] <= pc.g00[i - 1]) increasing = false;
        rep.add("green-monotone", "center visit count grows with the domain", "analytic",
                pc.g00.back() - pc.g00.front(), "strictly increasing", increasing);
    }

    // Green-ratio route equals the direct first-passage solve.
    {
        double worst = 0.0;
        for (const LatticePoint x : {LatticePoint{1, 0}, LatticePoint{10, 0}, LatticePoint{-37, 21}}) {
            const double a = hit_origin_before_exit(x, cfg.annulus_R);
            const double b = hit_origin_before_exit_direct(x, cfg.annulus_R);
            worst = std::max(worst, std::fabs(a - b));
        }
        rep.add("hit-origin-two-routes", "visit-ratio route vs direct absorption solve", "analytic",
                worst, "<= 1e-9", worst <= 1e-9);
    }

    // Log-ratio form of the origin-hitting probability. The denominator
    // carries the fitted intercept; the band then isolates the numerator's
    // O(1/|x|) correction.
    {
        const double p = hit_origin_before_exit(cfg.hit_x, cfg.hit_R);
        const double lx = std::log(std::sqrt(static_cast<double>(norm2(cfg.hit_x))));
        const double formula = pc.slope_hat * (std::log(cfg.hit_R) - lx) /
                               (pc.slope_hat * std::log(cfg.hit_R) + pc.gamma_hat);
        const double d = std::fabs(p - formula);
        rep.add("hit-origin-log-formula", "origin hitting probability vs log ratio", "analytic", d,
                "<= 0.05", d <= 0.05);
    }

    // Annulus crossing probabilities vs the log-ratio formula.
    {
        const AnnulusCrossing ac = annulus_crossing(cfg.annulus_x, cfg.annulus_r, cfg.annulus_R);
        const double xn = std::sqrt(static_cast<double>(norm2(cfg.annulus_x)));
        const double formula = std::log(xn / cfg.annulus_r) / std::log(cfg.annulus_R / cfg.annulus_r);
        rep.add("annulus-exit-formula", "outer-first crossing probability vs log ratio", "analytic",
                std::fabs(ac.p_exit_outer - formula), "<= 0.02",
                std::fabs(ac.p_exit_outer - formula) <= 0.02);
        const double comp = std::fabs(ac.p_exit_outer + ac.p_hit_inner - 1.0);
        rep.add("annulus-complement", "the two crossings exhaust the outcomes", "analytic", comp,
                "<= 1e-9", comp <= 1e-9);

        const AnnulusCrossing mid = annulus_crossing(cfg.annulus_x_mid, cfg.annulus_r, cfg.annulus_R);
        rep.add("annulus-geometric-mean", "balance at the geometric-mean radius", "analytic",
                std::fabs(mid.p_exit_outer - 0.5), "<= 0.02",
                std::fabs(mid.p_exit_outer - 0.5) <= 0.02);
    }

    // Middle-ring half crossing.
    {
        const HalfStep hs = annulus_half_step(cfg.half_mid, cfg.half_rho);
        rep.add("half-crossing", "outer-before-inner from the middle ring", "analytic",
                std::fabs(hs.p_up - 0.5), "<= 0.02", std::fabs(hs.p_up - 0.5) <= 0.02);
        const double comp = std::fabs(hs.p_up + hs.p_down - 1.0);
        rep.add("half-crossing-complement", "complementary half crossings", "analytic", comp,
                "<= 1e-9", comp <= 1e-9);

        std::vector<double> devs;
        for (const double mid : cfg.half_trend_mids)
            devs.push_back(std::fabs(annulus_half_step(mid, cfg.half_rho).p_up - 0.5));
        bool shrinking = true;
        for (std::size_t i = 1; i < devs.size(); ++i)
            if (devs[i] >= devs[i - 1]) shrinking = false;
        rep.add("half-crossing-trend", "half-crossing bias fades with scale", "analytic",
                devs.empty() ? 0.0 : devs.back(), "strictly decreasing deviations", shrinking);
    }

    // Exit-law uniformity over interior starts.
    {
        std::vector<double> ratios;
        for (const double eps : cfg.harnack_eps)
            ratios.push_back(harnack_ratio(cfg.harnack_R, eps, cfg.harnack_probes).max_ratio);
        const double at_smallest = ratios.back();
        const double cap = 1.0 + 5.0 * cfg.harnack_eps.back();
        rep.add("harnack-ratio", "exit-law ratio over deep interior starts", "fixture",
                at_smallest, fmt("<= %.3f", cap), at_smallest <= cap);
        bool monotone = true;
        for (std::size_t i = 1; i < ratios.size(); ++i)
            if (ratios[i] >= ratios[i - 1]) monotone = false;
        rep.add("harnack-monotone", "exit-law ratio tightens as starts concentrate", "analytic",
                ratios.front() - ratios.back(), "decreasing in eps", monotone);
    }

    return rep;
}

// ---------------------------------------------------------------------------
// local_time_suite
// ---------------------------------------------------------------------------

ExperimentReport local_time_suite(const LocalTimeSuiteConfig& cfg, std::uint64_t seed) {
    if (cfg.trials < 10000)
        throw std::invalid_argument("local_time_suite: need at least 1e4 trials");
    const LocalTimeLaw law = local_time_law(cfg.x0, cfg.R); // throws if x0 outside

    ExperimentReport rep;
    rep.name = "local-time-law";
    rep.master_seed = seed;
    rep.parameters = {{"R", cfg.R},
                      {"x0", {cfg.x0.x, cfg.x0.y}},
                      {"trials", cfg.trials},
                      {"phis", cfg.phis},
                      {"tail_z", cfg.tail_z},
                      {"tail_c", cfg.tail_c},
                      {"chi2_significance", cfg.chi2_significance}};

    const DiskSpec domain({0, 0}, cfg.R);
    const auto counts = run_indexed<std::uint32_t>(
        cfg.trials, cfg.threads, [&](std::size_t i) -> std::uint32_t {
            WalkState ws(cfg.x0, make_stream(seed, kSaltLocalTime, i));
            std::uint32_t visits = 0;
            walk_until_exit(ws, domain, [&visits](const LatticePoint& p) {
                if (p.x == 0 && p.y == 0) ++visits;
            });
            return visits;
        });

    const double n = static_cast<double>(cfg.trials);
    const double p = law.p_hit, g = law.green_mean;

    std::size_t hits = 0;
    for (const auto c : counts)
        if (c >= 1) ++hits;
    {
        const double freq = static_cast<double>(hits) / n;
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
        const double d = std::fabs(freq - p);
        rep.add("hit-frequency", "frequency of reaching the origin before exit", "analytic", freq,
                fmt("%.6f +- 3 sigma (sigma=%.2e)", p, sigma), d <= 3.0 * sigma || p >= 1.0);
    }
    {
        double s = 0.0;
        for (const auto c : counts)
            if (c >= 1) s += c;
        const double cond_mean = hits ? s / static_cast<double>(hits) : 0.0;
        const double sigma = std::sqrt((g * g - g) / std::max<double>(1.0, static_cast<double>(hits)));
        const double d = std::fabs(cond_mean - g);
        rep.add("conditional-mean", "mean origin local time given a hit", "analytic", cond_mean,
                fmt("%.6f +- 3 sigma (sigma=%.2e)", g, sigma), d <= 3.0 * sigma);
    }
    {
        // Chi-square fit of the conditional law against Geometric(1/G)
        // on {1,2,...}; right bins merged to expected mass >= 10.
        const double q = 1.0 - 1.0 / g;
        std::vector<double> expected;
        std::vector<std::size_t> observed;
        double tail_p = 1.0; // P(L >= k)
        std::size_t k = 1;
        std::vector<std::size_t> hist;
        for (const auto c : counts)
            if (c >= 1) {
                if (c >= hist.size()) hist.resize(c + 1, 0);
                ++hist[c];
            }
        const double nh = static_cast<double>(hits);
        while (tail_p * nh >= 20.0) {
            const double pk = tail_p / g; // P(L = k) = q^{k-1} (1/g)
            if (pk * nh < 10.0) break;
            expected.push_back(pk * nh);
            observed.push_back(k < hist.size() ? hist[k] : 0);
            tail_p *= q;
            ++k;
        }
        std::size_t tail_obs = 0;
        for (std::size_t j = k; j < hist.size(); ++j) tail_obs += hist[j];
        expected.push_back(tail_p * nh);
        observed.push_back(tail_obs);
        double stat = 0.0;
        for (std::size_t b = 0; b < expected.size(); ++b) {
            const double diff = static_cast<double>(observed[b]) - expected[b];
            stat += diff * diff / expected[b];
        }
        const double df = static_cast<double>(expected.size() - 1);
        const double crit = chi2_quantile(1.0 - cfg.chi2_significance, df);
        rep.add("geometric-chi2", "conditional local time is geometric", "analytic", stat,
                fmt("chi2(df=%.0f) <= %.3f", df, crit), stat <= crit);
    }
    for (const double phi : cfg.phis) {
        double s = 0.0, s2 = 0.0;
        for (const auto c : counts) {
            const double v = std::exp(-phi * static_cast<double>(c) / g);
            s += v;
            s2 += v * v;
        }
        const double mean = s / n;
        const double var = std::max(s2 / n - mean * mean, 0.0);
        const double sigma = std::sqrt(var / n);
        const double exact = law.laplace(phi);
        rep.add(fmt("laplace-phi-%.2f", phi), "transform of the origin local time", "analytic",
                mean, fmt("%.6f +- 3 sigma (sigma=%.2e)", exact, sigma),
                std::fabs(mean - exact) <= 3.0 * sigma);
    }
    for (const double z : cfg.tail_z) {
        std::size_t over = 0;
        const double thr = z * g;
        for (const auto c : counts)
            if (static_cast<double>(c) >= thr) ++over;
        const double freq = static_cast<double>(over) / n;
        const double bound = cfg.tail_c * std::sqrt(z) * std::exp(-z);
        rep.add(fmt("tail-z-%.0f", z), "exponential tail of the origin local time", "fixture",
                freq, fmt("<= %.6f", bound), freq <= bound);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// excursion_law_suite
// ---------------------------------------------------------------------------

namespace {

// Deep-traversal count of one excursion segment: from `entry` on the
// middle ring until the first arrival at the outer ring. A conditioned
// count given m completed middle-to-outer excursions is the sum over m
// independent segments (Markov property at the segment ends; the walk
// between segments contributes nothing and, unconfined, has unbounded
// expected return time).
std::int64_t segment_inner_count(const LatticePoint& entry, const RadiiSchedule& sched,
                                 Rng& rng) {
    ExcursionTracker tracker({0, 0}, sched);
    WalkState ws(entry, rng);
    tracker.observe(ws.position);
    std::uint64_t guard = 0;
    while (tracker.up_count(1) < 1) {
        random_step(ws);
        tracker.observe(ws.position);
        if (++guard > kDefaultStepCap)
            throw std::runtime_error("segment_inner_count: step cap exceeded");
    }
    rng = ws.rng;
    return static_cast<std::int64_t>(tracker.down_count(2));
}

std::vector<double> empirical_pmf(const std::vector<std::int64_t>& samples, std::size_t bins) {
    std::vector<double> pmf(bins, 0.0);
    for (const auto s : samples)
        if (s >= 0 && static_cast<std::size_t>(s) < bins)
            pmf[static_cast<std::size_t>(s)] += 1.0;
    for (auto& v : pmf) v /= static_cast<double>(samples.size());
    return pmf;
}

double tv_against_nb(const std::vector<std::int64_t>& samples, int m) {
    std::size_t bins = 1;
    for (const auto s : samples) bins = std::max(bins, static_cast<std::size_t>(s) + 1);
    const std::vector<double> emp = empirical_pmf(samples, bins);
    double tv = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < bins; ++j) {
        const double pj = nb_conditional_pmf(m, static_cast<std::int64_t>(j));
        tv += std::fabs(emp[j] - pj);
        mass += pj;
    }
    tv += std::max(0.0, 1.0 - mass); // ideal mass beyond the observed range
    return 0.5 * tv;
}

} // namespace

ExperimentReport excursion_law_suite(const ExcursionLawConfig& cfg, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "excursion-law";
    rep.master_seed = seed;
    rep.parameters = {{"inner_radius", cfg.inner_radius},
                      {"rho", cfg.rho},
                      {"conditioned_m", cfg.conditioned_m},
                      {"trials_per_m", cfg.trials_per_m},
                      {"tv_tol", cfg.tv_tol}};

    // Factor normalization: each negative-binomial row sums to one.
    {
        double worst = 0.0;
        for (std::int64_t m = 1; m <= 10; ++m) {
            double s = 0.0;
            for (std::int64_t j = 0;; ++j) {
                const double t = nb_conditional_pmf(m, j);
                s += t;
                if (j > 10 * m + 50 && t < 1e-20) break;
            }
            worst = std::max(worst, std::fabs(s - 1.0));
        }
        rep.add("nb-normalization", "negative-binomial rows are probability laws", "analytic",
                worst, "<= 1e-12", worst <= 1e-12);
    }

    const RadiiSchedule sched = RadiiSchedule::desk(cfg.inner_radius, cfg.rho, 2);
    const auto ring = boundary_of(disk_points(DiskSpec({0, 0}, sched.radius(1))));

    for (std::size_t mi = 0; mi < cfg.conditioned_m.size(); ++mi) {
        const int m = cfg.conditioned_m[mi];
        const auto samples = run_indexed<std::int64_t>(
            cfg.trials_per_m, cfg.threads, [&](std::size_t i) -> std::int64_t {
                Rng stream = make_stream(seed, kSaltExcursion,
                                         (static_cast<std::uint64_t>(mi) << 40) + i);
                std::int64_t total = 0;
                for (int j = 0; j < m; ++j) {
                    const LatticePoint entry = ring[stream.below(ring.size())];
                    total += segment_inner_count(entry, sched, stream);
                }
                return total;
            });
        const double tv = tv_against_nb(samples, m);
        rep.add(fmt("tracker-vs-nb-m%.0f", static_cast<double>(m)),
                "conditional deeper-count law vs the fair negative binomial", "fixture", tv,
                fmt("TV <= %.3f", cfg.tv_tol), tv <= cfg.tv_tol);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// erdos_taylor_scan
// ---------------------------------------------------------------------------

ExperimentReport erdos_taylor_scan(const ErdosTaylorConfig& cfg, std::uint64_t seed) {
    if (cfg.trials < 20) throw std::invalid_argument("erdos_taylor_scan: need >= 20 trials");
    for (std::size_t i = 1; i < cfg.radii.size(); ++i)
        if (!(cfg.radii[i] > cfg.radii[i - 1]))
            throw std::invalid_argument("erdos_taylor_scan: radii must increase");

    ExperimentReport rep;
    rep.name = "erdos-taylor";
    rep.master_seed = seed;
    rep.parameters = {{"radii", cfg.radii},
                      {"trials", cfg.trials},
                      {"band", {cfg.band_lo, cfg.band_hi}}};

    std::vector<double> medians;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        const double R = cfg.radii[ri];
        const DiskSpec domain({0, 0}, R);
        const double lr2 = std::log(R) * std::log(R);
        const auto ratios = run_indexed<double>(
            cfg.trials, cfg.threads, [&](std::size_t i) -> double {
                WalkState ws({0, 0},
                             make_stream(seed, kSaltErdosTaylor, (ri << 32) + i));
                LocalTimeLedger ledger;
                walk_until_exit(ws, domain,
                                [&ledger](const LatticePoint& p) { ledger.record_visit(p); });
                return static_cast<double>(ledger.max_local_time().second) / lr2;
            });
        for (const double r : ratios) min_ratio = std::min(min_ratio, r);
        const double med = median_of(ratios);
        const MeanVar mv = mean_var(ratios);
        const double ci = 1.96 * std::sqrt(mv.var / static_cast<double>(mv.n));
        medians.push_back(med);

        const double lo = cfg.band_lo * kTwoOverPi, hi = cfg.band_hi * kTwoOverPi;
        rep.add(fmt("median-R-%.0f", R), "most-visited-site count over (log R)^2", "fixture", med,
                fmt("[%.4f, %.4f]; mean CI half-width %.4f", lo, hi, ci), med >= lo && med <= hi);
    }
    rep.add("ratio-positive", "every trial ratio is finite and positive", "plumbing", min_ratio,
            "> 0", min_ratio > 0.0 && std::isfinite(min_ratio));
    rep.add("median-drift", "band-center drift across radii (recorded)", "plumbing",
            medians.back() - medians.front(), "recorded, not asserted", true);
    rep.add("limit-unverified", "almost-sure limit 2/pi", "analytic",
            medians.back() - kTwoOverPi,
            "NOT verified at these radii; convergence is logarithmic", true);
    return rep;
}

// ---------------------------------------------------------------------------
// spectrum_scan
// ---------------------------------------------------------------------------

ExperimentReport spectrum_scan(const SpectrumConfig& cfg, std::uint64_t seed) {
    for (const double a : cfg.a_grid)
        if (!(a > 0.0 && a < 2.0))
            throw std::invalid_argument("spectrum_scan: a grid must lie in (0,2)");

    ExperimentReport rep;
    rep.name = "spectrum";
    rep.master_seed = seed;
    rep.parameters = {{"radii", cfg.radii},         {"a_grid", cfg.a_grid},
                      {"slope_a", cfg.slope_a},     {"trials", cfg.trials},
                      {"slope_center", cfg.slope_center}, {"slope_tol", cfg.slope_tol},
                      {"cheb_eps", cfg.cheb_eps},   {"cheb_c", cfg.cheb_c},
                      {"cheb_points", cfg.cheb_points}};

    struct TrialOut {
        std::vector<std::uint64_t> counts;  // per a in a_grid
        std::uint64_t count_slope_a = 0;
        std::uint32_t cheb_hits = 0; // sampled points exceeding the slope_a threshold
        bool monotone = true;
    };

    std::vector<double> log_mean_counts, log_radii;
    std::vector<std::vector<double>> grid_means(cfg.a_grid.size()); // per a, per radius
    bool monotone_all = true;
    bool censored_slope = false;
    std::vector<double> cheb_freq;
    std::vector<double> merged_counts; // union-ledger count per radius (recorded)

    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        const double R = cfg.radii[ri];
        const DiskSpec domain({0, 0}, R);
        const double lr = std::log(R);
        const double thr_slope = (2.0 * cfg.slope_a / M_PI) * lr * lr;

        std::vector<LatticePoint> probes;
        for (std::size_t j = 0; j < cfg.cheb_points; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(cfg.cheb_points);
            probes.push_back({static_cast<std::int64_t>(std::llround(0.5 * R * std::cos(th))),
                              static_cast<std::int64_t>(std::llround(0.5 * R * std::sin(th)))});
        }

        std::vector<LocalTimeLedger> ledgers(cfg.trials);
        const auto outs = run_indexed<TrialOut>(
            cfg.trials, cfg.threads, [&](std::size_t i) -> TrialOut {
                WalkState ws({0, 0}, make_stream(seed, kSaltSpectrum, (ri << 32) + i));
                LocalTimeLedger& ledger = ledgers[i];
                walk_until_exit(ws, domain,
                                [&ledger](const LatticePoint& p) { ledger.record_visit(p); });
                TrialOut out;
                std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
                for (const double a : cfg.a_grid) {
                    const std::uint64_t c = ledger.psi_count(R, a);
                    if (c > prev) out.monotone = false;
                    prev = c;
                    out.counts.push_back(c);
                }
                out.count_slope_a = ledger.psi_count(R, cfg.slope_a);
                for (const auto& x : probes)
                    if (static_cast<double>(ledger.count_at(x)) >= thr_slope) ++out.cheb_hits;
                return out;
            });

        double sum = 0.0;
        std::uint64_t cheb_total = 0;
        for (const auto& o : outs) {
            sum += static_cast<double>(o.count_slope_a);
            cheb_total += o.cheb_hits;
            if (!o.monotone) monotone_all = false;
        }
        for (std::size_t ai = 0; ai < cfg.a_grid.size(); ++ai) {
            double s = 0.0;
            for (const auto& o : outs) s += static_cast<double>(o.counts[ai]);
            grid_means[ai].push_back(s / static_cast<double>(cfg.trials));
        }
        const double mean = sum / static_cast<double>(cfg.trials);
        if (mean <= 0.0) censored_slope = true;
        else {
            log_mean_counts.push_back(std::log(mean));
            log_radii.push_back(lr);
        }
        cheb_freq.push_back(static_cast<double>(cheb_total) /
                            static_cast<double>(cfg.trials * probes.size()));

        LocalTimeLedger merged;
        for (const auto& l : ledgers) merged.merge(l);
        merged_counts.push_back(static_cast<double>(merged.psi_count(R, cfg.slope_a)));
    }

    // Growth exponent of the thick-point count at slope_a.
    if (censored_slope || log_mean_counts.size() < 2) {
        auto& c = rep.add("count-slope", "growth exponent of the thick-point count", "fixture",
                          0.0, "censored: empty counts at this a", true);
        c.censored = true;
    } else {
        const LinearFit f = linear_fit(log_radii, log_mean_counts);
        rep.add("count-slope", "growth exponent of the thick-point count", "fixture", f.slope,
                fmt("%.2f +- %.2f", cfg.slope_center, cfg.slope_tol),
                std::fabs(f.slope - cfg.slope_center) <= cfg.slope_tol);
    }
    rep.add("counts-monotone-in-a", "higher thresholds keep fewer points", "analytic",
            monotone_all ? 1.0 : 0.0, "monotone in every trial", monotone_all);

    // Qualitative: the growth exponent falls as the threshold rises
    // (toward the dimension-2 scaling of the whole range as a -> 0).
    {
        auto slope_at = [&](std::size_t ai) -> double {
            std::vector<double> ys;
            for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
                if (grid_means[ai][ri] <= 0.0) return std::numeric_limits<double>::quiet_NaN();
                ys.push_back(std::log(grid_means[ai][ri]));
            }
            std::vector<double> xs;
            for (const double R : cfg.radii) xs.push_back(std::log(R));
            return linear_fit(xs, ys).slope;
        };
        const double lo = slope_at(0), hi = slope_at(cfg.a_grid.size() - 1);
        auto& cell = rep.add("slope-falls-with-a", "growth exponent decreases in the threshold",
                             "fixture", lo - hi, "> 0 between the grid extremes",
                             !(std::isnan(lo) || std::isnan(hi)) && lo > hi);
        cell.censored = std::isnan(lo) || std::isnan(hi);
    }

    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
        const double R = cfg.radii[ri];
        const double bound = cfg.cheb_c * std::pow(R, -cfg.slope_a + cfg.cheb_eps);
        rep.add(fmt("tail-frequency-R-%.0f", R),
                "pointwise thick probability against the moment bound", "fixture", cheb_freq[ri],
                fmt("<= %.5f", bound), cheb_freq[ri] <= bound);
    }
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri)
        rep.add(fmt("merged-count-R-%.0f", cfg.radii[ri]),
                "union-ledger thick count (recorded)", "plumbing", merged_counts[ri],
                "recorded, not asserted", true);
    return rep;
}

// ---------------------------------------------------------------------------
// successful_points_scan
// ---------------------------------------------------------------------------

ExperimentReport successful_points_scan(const SuccessfulConfig& cfg, std::uint64_t seed) {
    const RadiiSchedule sched = RadiiSchedule::desk(cfg.r_min, cfg.rho, cfg.levels);
    const double r0 = sched.radius(0);
    if (r0 > 400.0)
        throw std::invalid_argument("successful_points_scan: r_min * rho^levels exceeds the 400 cap");
    if (cfg.levels < 3)
        throw std::invalid_argument("successful_points_scan: need at least 3 levels");
    const double K = sched.boundary_radius();

    ExperimentReport rep;
    rep.name = "successful-points";
    rep.master_seed = seed;
    rep.parameters = {{"r_min", cfg.r_min},   {"rho", cfg.rho},
                      {"levels", cfg.levels}, {"a_directional", cfg.a_directional},
                      {"a_grid", cfg.a_grid}, {"a_infeasible", cfg.a_infeasible},
                      {"trials", cfg.trials}, {"center_grid", cfg.center_grid}};

    // Center grid inside [2 r_0, 3 r_0]^2.
    std::vector<LatticePoint> centers;
    const double spacing = r0 / static_cast<double>(cfg.center_grid);
    for (int i = 0; i < cfg.center_grid; ++i)
        for (int j = 0; j < cfg.center_grid; ++j)
            centers.push_back(
                {static_cast<std::int64_t>(std::llround(2.0 * r0 + (i + 0.5) * spacing)),
                 static_cast<std::int64_t>(std::llround(2.0 * r0 + (j + 0.5) * spacing))});

    std::unordered_map<LatticePoint, std::size_t, PointHash> center_index;
    for (std::size_t c = 0; c < centers.size(); ++c) center_index.emplace(centers[c], c);

    // Bounding box around the tracked neighborhood.
    const std::int64_t box_lo = static_cast<std::int64_t>(std::floor(2.0 * r0 - r0 - 2.0));
    const std::int64_t box_hi = static_cast<std::int64_t>(std::ceil(3.0 * r0 + r0 + 2.0));

    struct TrialOut {
        std::vector<std::vector<std::uint64_t>> counts; // per center: N_1..N_levels
        std::vector<std::uint64_t> visits;              // per center: local time at the center
    };

    const DiskSpec domain({0, 0}, K);
    const auto outs = run_indexed<TrialOut>(cfg.trials, cfg.threads, [&](std::size_t t) {
        std::vector<ExcursionTracker> trackers;
        trackers.reserve(centers.size());
        for (const auto& c : centers) trackers.emplace_back(c, sched);
        std::vector<std::uint64_t> visits(centers.size(), 0);
        WalkState ws({0, 0}, make_stream(seed, kSaltSuccessful, t));
        walk_until_exit(
            ws, domain,
            [&](const LatticePoint& p) {
                if (p.x < box_lo || p.x > box_hi || p.y < box_lo || p.y > box_hi) return;
                for (auto& tr : trackers) tr.observe(p);
                const auto it = center_index.find(p);
                if (it != center_index.end()) ++visits[it->second];
            },
            4'000'000'000ULL);
        TrialOut out;
        out.visits = std::move(visits);
        for (const auto& tr : trackers) out.counts.push_back(tr.down_counts());
        return out;
    });

    // Directional mechanism: centers whose deepest-level count reaches the
    // admissible band's lower edge carry more local time. The lower edge
    // is the load-bearing half of the band in the local-time lower bound;
    // a_directional keeps it small enough to observe.
    {
        const SuccessCriterion crit{cfg.a_directional, cfg.levels};
        const double edge = crit.frak(cfg.levels) - cfg.levels;
        std::vector<double> deep, shallow;
        for (const auto& o : outs)
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double nn = static_cast<double>(o.counts[c].back());
                (nn >= edge ? deep : shallow).push_back(static_cast<double>(o.visits[c]));
            }
        bool pass = false;
        double z = 0.0;
        if (deep.size() >= 5 && shallow.size() >= 5) {
            const MeanVar a = mean_var(deep), b = mean_var(shallow);
            z = (a.mean - b.mean) /
                std::sqrt(a.var / static_cast<double>(a.n) + b.var / static_cast<double>(b.n));
            pass = z > 2.326; // one-sided 0.01
        }
        rep.add("deep-count-local-time-advantage",
                "band-edge deep-excursion counts force local time", "analytic", z, "z > 2.326",
                pass);
        rep.add("deep-count-frequency", "centers at or above the band's lower edge", "plumbing",
                static_cast<double>(deep.size()) /
                    static_cast<double>(deep.size() + shallow.size()),
                "recorded, not asserted", true);
    }

    // The literal successful-vs-unsuccessful mean comparison is recorded;
    // full successes are too rare at desk scale to power a test, and at
    // n < k0 the predicate has no band level and hence no advantage.
    {
        const SuccessCriterion crit{cfg.a_directional, cfg.levels};
        std::vector<double> vis_succ, vis_fail;
        for (const auto& o : outs)
            for (std::size_t c = 0; c < centers.size(); ++c)
                (is_n_successful(o.counts[c], crit) ? vis_succ : vis_fail)
                    .push_back(static_cast<double>(o.visits[c]));
        double gap = 0.0;
        const bool have_both = !vis_succ.empty() && !vis_fail.empty();
        if (have_both) gap = mean_var(vis_succ).mean - mean_var(vis_fail).mean;
        auto& cell = rep.add("successful-mean-gap",
                             "mean local-time gap, successful minus unsuccessful", "plumbing",
                             gap, "recorded, not asserted", true);
        cell.censored = !have_both;
    }

    // Full-depth census against the admissible-history mass.
    const double cells = static_cast<double>(outs.size() * centers.size());
    std::vector<double> freq, dp_log;
    for (const double a : cfg.a_grid) {
        const SuccessCriterion crit{a, cfg.levels};
        std::size_t hits = 0;
        for (const auto& o : outs)
            for (std::size_t c = 0; c < centers.size(); ++c)
                if (is_n_successful(o.counts[c], crit)) ++hits;
        freq.push_back(static_cast<double>(hits) / cells);
        dp_log.push_back(successful_prob_dp(a, cfg.levels));
    }
    bool emp_noninc = true, dp_strict = true;
    for (std::size_t i = 1; i < freq.size(); ++i) {
        if (freq[i] > freq[i - 1]) emp_noninc = false;
        if (!(dp_log[i] < dp_log[i - 1])) dp_strict = false;
    }
    rep.add("success-frequency-noninc", "observed success frequency vs tightening bands",
            "analytic", freq.front() - freq.back(), "nonincreasing in a", emp_noninc);
    rep.add("admissible-mass-strict", "admissible-history mass strictly falls in a", "analytic",
            dp_log.front() - dp_log.back(), "strictly decreasing in a", dp_strict);
    for (std::size_t i = 0; i < cfg.a_grid.size(); ++i) {
        const double pred = std::exp(dp_log[i]);
        rep.add(fmt("success-vs-mass-a-%.2f", cfg.a_grid[i]),
                "lattice-to-chain correction factor (recorded)", "plumbing",
                pred > 0.0 ? freq[i] / pred : 0.0, "recorded, not asserted", true);
    }
    {
        const SuccessCriterion crit{cfg.a_infeasible, cfg.levels};
        std::size_t hits = 0;
        for (const auto& o : outs)
            for (std::size_t c = 0; c < centers.size(); ++c)
                if (is_n_successful(o.counts[c], crit)) ++hits;
        rep.add("infeasible-band-empty", "no center meets an unreachable band", "analytic",
                static_cast<double>(hits), "= 0", hits == 0);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// decoupling_probe
// ---------------------------------------------------------------------------

ExperimentReport decoupling_probe(const DecouplingConfig& cfg, std::uint64_t seed) {
    if (cfg.rhos.size() < 2)
        throw std::invalid_argument("decoupling_probe: need at least two ratios");

    ExperimentReport rep;
    rep.name = "decoupling";
    rep.master_seed = seed;
    rep.parameters = {{"inner_radius", cfg.inner_radius},
                      {"rhos", cfg.rhos},
                      {"samples", cfg.samples},
                      {"tv_tol_largest_rho", cfg.tv_tol_largest_rho},
                      {"tv_tol_control", cfg.tv_tol_control}};
    const bool censored = cfg.samples < cfg.min_samples;

    auto run_arm = [&](const RadiiSchedule& sched, const LatticePoint& entry,
                       std::uint64_t block) {
        return run_indexed<std::int64_t>(cfg.samples, cfg.threads, [&](std::size_t i) {
            Rng stream = make_stream(seed, kSaltDecoupling, (block << 40) + i);
            return segment_inner_count(entry, sched, stream);
        });
    };
    auto tv_between = [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
        std::size_t bins = 1;
        for (const auto s : a) bins = std::max(bins, static_cast<std::size_t>(s) + 1);
        for (const auto s : b) bins = std::max(bins, static_cast<std::size_t>(s) + 1);
        const auto pa = empirical_pmf(a, bins), pb = empirical_pmf(b, bins);
        return total_variation(pa, pb);
    };

    std::vector<double> tvs;
    double tv_control = 0.0;
    for (std::size_t k = 0; k < cfg.rhos.size(); ++k) {
        const double rho = cfg.rhos[k];
        const RadiiSchedule sched = RadiiSchedule::desk(cfg.inner_radius, rho, 2);
        const auto ring = boundary_of(disk_points(DiskSpec({0, 0}, sched.radius(1))));

        // Two conditioning configurations: the entry point of least radius
        // on the positive x-axis, and the entry point of largest radius.
        LatticePoint z_near = ring.front(), z_far = ring.front();
        for (const auto& p : ring) {
            if (p.y == 0 && p.x > 0 && (z_near.y != 0 || z_near.x <= 0 || p.x < z_near.x))
                z_near = p;
            if (norm2(p) > norm2(z_far) || (norm2(p) == norm2(z_far) && p < z_far)) z_far = p;
        }

        const auto arm_a = run_arm(sched, z_near, 4 * k);
        const auto arm_b = run_arm(sched, z_far, 4 * k + 1);
        tvs.push_back(tv_between(arm_a, arm_b));
        auto& cell = rep.add(fmt("tv-rho-%.0f", rho),
                             "entry-point sensitivity of the deeper-count law", "fixture",
                             tvs.back(), k + 1 == cfg.rhos.size()
                                             ? fmt("<= %.3f", cfg.tv_tol_largest_rho)
                                             : std::string("recorded"),
                             k + 1 != cfg.rhos.size() || tvs.back() <= cfg.tv_tol_largest_rho);
        cell.censored = censored;

        if (k == 0) {
            // Control at the cheapest geometry: identical entry points.
            const auto arm_c = run_arm(sched, z_near, 4 * k + 2);
            tv_control = tv_between(arm_a, arm_c);
        }
    }
    {
        auto& cell = rep.add("tv-trend", "entry sensitivity fades as rings separate", "fixture",
                             tvs.front() - tvs.back(), ">= 0 from smallest to largest ratio",
                             tvs.front() >= tvs.back());
        cell.censored = censored;
    }
    {
        auto& cell = rep.add("tv-control", "identical configurations differ only by noise",
                             "fixture", tv_control, fmt("<= %.3f", cfg.tv_tol_control),
                             tv_control <= cfg.tv_tol_control);
        cell.censored = censored;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// verify_all
// ---------------------------------------------------------------------------

ReportBundle verify_all(std::uint64_t seed, const VerifyConfig& cfg) {
    ReportBundle bundle;
    bundle.master_seed = seed;

    PotentialSuiteConfig pot;
    bundle.reports.push_back(potential_suite(pot, seed));

    LocalTimeSuiteConfig lt;
    lt.threads = cfg.threads;
    bundle.reports.push_back(local_time_suite(lt, seed));

    ExcursionLawConfig ex;
    ex.threads = cfg.threads;
    bundle.reports.push_back(excursion_law_suite(ex, seed));

    ErdosTaylorConfig et;
    et.threads = cfg.threads;
    bundle.reports.push_back(erdos_taylor_scan(et, seed));

    SpectrumConfig sp;
    sp.threads = cfg.threads;
    bundle.reports.push_back(spectrum_scan(sp, seed));

    SuccessfulConfig su;
    su.threads = cfg.threads;
    bundle.reports.push_back(successful_points_scan(su, seed));

    DecouplingConfig dc;
    dc.threads = cfg.threads;
    bundle.reports.push_back(decoupling_probe(dc, seed));

    return bundle;
}

} // namespace rw2d
