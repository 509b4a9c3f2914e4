// rw2d — simulation and verification toolkit for frequently visited
// points of the planar simple random walk.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rw2d/experiments.hpp"
#include "rw2d/histories.hpp"
#include "rw2d/localtime.hpp"
#include "rw2d/potential.hpp"
#include "rw2d/walk.hpp"

namespace {

using namespace rw2d;

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir;
    std::string format = "json";
    bool timing = false;
};

void emit(const GlobalOpts& g, const ReportBundle& bundle) {
    if (g.format == "csv")
        std::cout << bundle.to_csv();
    else
        std::cout << bundle.to_json(g.timing).dump(2) << '\n';
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        std::ofstream js(std::filesystem::path(g.out_dir) / "report.json", std::ios::binary);
        js << bundle.to_json(g.timing).dump(2) << '\n';
        std::ofstream cs(std::filesystem::path(g.out_dir) / "metrics.csv", std::ios::binary);
        cs << bundle.to_csv();
    }
}

int finish(const GlobalOpts& g, ExperimentReport rep) {
    ReportBundle b;
    b.master_seed = rep.master_seed;
    b.reports.push_back(std::move(rep));
    emit(g, b);
    return b.all_passed() ? 0 : 1;
}

// Tokens for config-file keys the command line did not set itself.
std::vector<std::string> config_tokens(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string t = argv[i];
        if (t == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (t.rfind("--config=", 0) == 0) path = t.substr(9);
    }
    std::vector<std::string> extra;
    if (path.empty()) return extra;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + line);
        const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        const std::string flag = "--" + key;
        bool overridden = false;
        for (int i = 1; i < argc; ++i) {
            const std::string t = argv[i];
            if (t == flag || t.rfind(flag + "=", 0) == 0) overridden = true;
        }
        if (overridden) continue;
        extra.push_back(flag);
        for (std::size_t start = 0; start < value.size();) {
            const auto sp = value.find(' ', start);
            extra.push_back(value.substr(start, sp - start));
            if (sp == std::string::npos) break;
            start = sp + 1;
        }
        if (value.empty()) extra.pop_back();
    }
    return extra;
}

std::vector<std::int64_t> parse_counts(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::string cur;
    for (const char ch : csv + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

LatticePoint point_from(const std::vector<std::int64_t>& xy) {
    return {xy.at(0), xy.at(1)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D simple random walk: local times, excursions, thick points"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    // Flat key=value config file; command-line flags override file values.
    // Unknown keys surface as regular unknown-option errors.
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file; flags override");

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master seed; every random stream derives from it")
        ->envname("RW2D_SEED")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", g.out_dir, "directory for report.json and metrics.csv");
    app.add_option("--format", g.format, "stdout format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_flag("--timing", g.timing, "include wall-clock runtime in reports");

    // ---- green ----------------------------------------------------------
    double green_R = 10.0;
    auto* c_green = app.add_subcommand("green", "Green's function of a lattice disk");
    c_green->add_option("--R", green_R, "disk radius")->capture_default_str();

    // ---- hitting --------------------------------------------------------
    double hit_R = 10.0;
    std::vector<std::int64_t> hit_x{0, 0};
    auto* c_hit = app.add_subcommand("hitting", "exit law of a lattice disk");
    c_hit->add_option("--R", hit_R, "disk radius")->capture_default_str();
    c_hit->add_option("--x", hit_x, "start point")->expected(2);

    // ---- annulus --------------------------------------------------------
    double ann_r = 10.0, ann_R = 100.0;
    std::vector<std::int64_t> ann_x{30, 0};
    auto* c_ann = app.add_subcommand("annulus", "crossing probabilities vs the log-ratio law");
    c_ann->add_option("--r", ann_r, "inner radius")->capture_default_str();
    c_ann->add_option("--R", ann_R, "outer radius")->capture_default_str();
    c_ann->add_option("--x", ann_x, "start point")->expected(2);

    // ---- local-time-law --------------------------------------------------
    LocalTimeSuiteConfig lt;
    std::vector<std::int64_t> lt_x{10, 0};
    auto* c_lt = app.add_subcommand("local-time-law", "origin local time against the exact law");
    c_lt->add_option("--R", lt.R, "disk radius")->capture_default_str();
    c_lt->add_option("--x", lt_x, "start point")->expected(2);
    c_lt->add_option("--trials", lt.trials, "Monte Carlo trials")->capture_default_str();

    // ---- excursions -------------------------------------------------------
    ExcursionLawConfig ex;
    bool ex_dump = false;
    int ex_levels = 3;
    std::vector<std::int64_t> ex_center;
    auto* c_ex = app.add_subcommand("excursions", "tracker counts vs the idealized cascade");
    c_ex->add_option("--r", ex.inner_radius, "innermost ring radius")->capture_default_str();
    c_ex->add_option("--ratio", ex.rho, "ring ratio")->capture_default_str();
    c_ex->add_option("--trials", ex.trials_per_m, "trials per conditioned count")
        ->capture_default_str();
    c_ex->add_flag("--dump", ex_dump, "single walk: dump per-level counts for one center");
    c_ex->add_option("--levels", ex_levels, "levels for --dump")->capture_default_str();
    c_ex->add_option("--x", ex_center, "tracked center for --dump")->expected(2);

    // ---- histories ---------------------------------------------------------
    int hist_n = 3;
    std::string hist_m;
    std::size_t hist_trials = 0;
    double hist_stirling_a = 0.0;
    auto* c_his = app.add_subcommand("histories", "history counting and the level chain");
    c_his->add_option("--levels", hist_n, "level count n")->capture_default_str();
    c_his->add_option("--m", hist_m, "comma-separated upcrossing counts m_2..m_n");
    c_his->add_option("--trials", hist_trials, "level-chain samples to draw (0 = none)");
    c_his->add_option("--a", hist_stirling_a,
                      "emit the central-band mass sweep at this threshold parameter");

    // ---- qn ---------------------------------------------------------------
    double qn_a = 0.5;
    int qn_n = 6;
    bool qn_oracle = false;
    auto* c_qn = app.add_subcommand("qn", "admissible-history mass (log)");
    c_qn->add_option("--a", qn_a, "threshold parameter in (0,2)")->capture_default_str();
    c_qn->add_option("--levels", qn_n, "level count n")->capture_default_str();
    c_qn->add_flag("--oracle", qn_oracle, "cross-check against exact enumeration");

    // ---- erdos-taylor -------------------------------------------------------
    ErdosTaylorConfig et;
    auto* c_et = app.add_subcommand("erdos-taylor", "most-visited-site ratio across radii");
    c_et->add_option("--R", et.radii, "radii (repeatable)")->expected(-1);
    c_et->add_option("--trials", et.trials, "trials per radius")->capture_default_str();

    // ---- spectrum ------------------------------------------------------------
    SpectrumConfig sp;
    auto* c_sp = app.add_subcommand("spectrum", "thick-point counts and growth exponent");
    c_sp->add_option("--R", sp.radii, "radii (repeatable)")->expected(-1);
    c_sp->add_option("--a", sp.a_grid, "threshold grid (repeatable)")->expected(-1);
    c_sp->add_option("--alpha", sp.slope_a, "threshold for the slope fit")->capture_default_str();
    c_sp->add_option("--trials", sp.trials, "trials per radius")->capture_default_str();

    // ---- successful ---------------------------------------------------------
    SuccessfulConfig su;
    auto* c_su = app.add_subcommand("successful", "census of n-successful centers");
    c_su->add_option("--r", su.r_min, "innermost radius")->capture_default_str();
    c_su->add_option("--ratio", su.rho, "ring ratio")->capture_default_str();
    c_su->add_option("--levels", su.levels, "level count")->capture_default_str();
    c_su->add_option("--a", su.a_grid, "threshold grid (repeatable)")->expected(-1);
    c_su->add_option("--trials", su.trials, "walks to simulate")->capture_default_str();

    // ---- decoupling -----------------------------------------------------------
    DecouplingConfig dc;
    auto* c_dc = app.add_subcommand("decoupling", "entry-point sensitivity of deep counts");
    c_dc->add_option("--r", dc.inner_radius, "innermost ring radius")->capture_default_str();
    c_dc->add_option("--ratio", dc.rhos, "ring ratios (repeatable)")->expected(-1);
    c_dc->add_option("--trials", dc.samples, "samples per arm")->capture_default_str();

    // ---- verify -----------------------------------------------------------------
    auto* c_ver = app.add_subcommand("verify", "run every suite at default configuration");

    try {
        std::vector<std::string> tokens;
        for (int i = 0; i < argc; ++i) tokens.emplace_back(argv[i]);
        for (auto& t : config_tokens(argc, argv)) tokens.push_back(std::move(t));
        std::vector<char*> raw;
        raw.reserve(tokens.size());
        for (auto& t : tokens) raw.push_back(t.data());
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help & friends
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*c_green) {
            ExperimentReport rep;
            rep.name = "green";
            rep.master_seed = g.seed;
            rep.parameters = {{"R", green_R}};
            const auto pts = disk_points(DiskSpec({0, 0}, green_R));
            if (pts.size() <= 2000) {
                const GreenTable t = green(pts, 1e-10);
                rep.add("g00", "expected visits to the center", "plumbing",
                        t.value({0, 0}, {0, 0}), "recorded", true);
                rep.add("residual", "defining-relation defect", "analytic",
                        std::max(t.residual, t.symmetry_defect), "<= 1e-10",
                        std::max(t.residual, t.symmetry_defect) <= 1e-10);
                if (!g.out_dir.empty()) {
                    std::filesystem::create_directories(g.out_dir);
                    std::ofstream f(std::filesystem::path(g.out_dir) / "green.csv",
                                    std::ios::binary);
                    f << t.to_csv();
                }
            } else {
                LatticeDomain dom(pts);
                SolveStats st;
                const auto col = green_column(dom, {0, 0}, 1e-10, &st);
                rep.add("g00", "expected visits to the center", "plumbing",
                        col[static_cast<std::size_t>(dom.index_of({0, 0}))], "recorded", true);
                rep.add("residual", "defining-relation defect", "analytic", st.residual_max,
                        "<= 1e-10", st.residual_max <= 1e-10);
            }
            return finish(g, std::move(rep));
        }
        if (*c_hit) {
            ExperimentReport rep;
            rep.name = "hitting";
            rep.master_seed = g.seed;
            rep.parameters = {{"R", hit_R}, {"x", hit_x}};
            LatticeDomain dom = LatticeDomain::disk(DiskSpec({0, 0}, hit_R));
            const BoundaryPmf pmf = hitting_distribution(dom, point_from(hit_x));
            rep.add("pmf-total", "exit is certain from a finite domain", "analytic", pmf.sum,
                    "1 +- 1e-9", std::fabs(pmf.sum - 1.0) <= 1e-9);
            if (!g.out_dir.empty()) {
                std::filesystem::create_directories(g.out_dir);
                std::ofstream f(std::filesystem::path(g.out_dir) / "hitting.csv",
                                std::ios::binary);
                f << pmf.to_csv();
            }
            return finish(g, std::move(rep));
        }
        if (*c_ann) {
            ExperimentReport rep;
            rep.name = "annulus";
            rep.master_seed = g.seed;
            rep.parameters = {{"r", ann_r}, {"R", ann_R}, {"x", ann_x}};
            const LatticePoint x = point_from(ann_x);
            const AnnulusCrossing ac = annulus_crossing(x, ann_r, ann_R);
            const double xn = std::sqrt(static_cast<double>(norm2(x)));
            const double formula = std::log(xn / ann_r) / std::log(ann_R / ann_r);
            rep.add("exact-p-exit-outer", "outer-first crossing probability", "plumbing",
                    ac.p_exit_outer, "recorded", true);
            rep.add("log-ratio-formula", "log-ratio crossing value", "plumbing", formula,
                    "recorded", true);
            rep.add("formula-gap", "exact solve vs log-ratio law", "analytic",
                    std::fabs(ac.p_exit_outer - formula), "<= 0.02",
                    std::fabs(ac.p_exit_outer - formula) <= 0.02);
            rep.add("complement", "crossing outcomes are exhaustive", "analytic",
                    std::fabs(ac.p_exit_outer + ac.p_hit_inner - 1.0), "<= 1e-9",
                    std::fabs(ac.p_exit_outer + ac.p_hit_inner - 1.0) <= 1e-9);
            return finish(g, std::move(rep));
        }
        if (*c_lt) {
            lt.x0 = point_from(lt_x);
            lt.threads = g.threads;
            return finish(g, local_time_suite(lt, g.seed));
        }
        if (*c_ex) {
            if (ex_dump) {
                const RadiiSchedule sched =
                    RadiiSchedule::desk(ex.inner_radius, ex.rho, ex_levels);
                const double r0 = sched.radius(0);
                const LatticePoint center =
                    ex_center.size() == 2
                        ? point_from(ex_center)
                        : LatticePoint{static_cast<std::int64_t>(std::llround(2.5 * r0)),
                                       static_cast<std::int64_t>(std::llround(2.5 * r0))};
                ExcursionTracker tracker(center, sched, true);
                WalkState ws({0, 0}, Rng(g.seed, 0));
                const ExitResult res = walk_until_exit(
                    ws, DiskSpec({0, 0}, sched.boundary_radius()),
                    [&tracker](const LatticePoint& p) { tracker.observe(p); });
                nlohmann::ordered_json j;
                j["seed"] = g.seed;
                j["center"] = {center.x, center.y};
                auto radii = nlohmann::ordered_json::array();
                for (int k = 0; k <= sched.levels(); ++k) radii.push_back(sched.radius(k));
                j["radii"] = std::move(radii);
                j["exit_time"] = res.exit_time;
                j["truncated"] = res.truncated;
                auto down = nlohmann::ordered_json::array(), up = nlohmann::ordered_json::array();
                for (int k = 1; k <= sched.levels(); ++k) {
                    down.push_back(tracker.down_count(k));
                    up.push_back(tracker.up_count(k));
                }
                j["downcrossings"] = std::move(down);
                j["upcrossings"] = std::move(up);
                auto segs = nlohmann::ordered_json::array();
                for (const auto& s : tracker.segments())
                    segs.push_back({{"level", s.level},
                                    {"direction", s.downward ? "down" : "up"},
                                    {"t_begin", s.t_begin},
                                    {"t_end", s.t_end},
                                    {"from", {s.p_begin.x, s.p_begin.y}},
                                    {"to", {s.p_end.x, s.p_end.y}}});
                j["segments"] = std::move(segs);
                std::cout << j.dump(2) << '\n';
                return res.truncated ? 1 : 0;
            }
            ex.threads = g.threads;
            return finish(g, excursion_law_suite(ex, g.seed));
        }
        if (*c_his) {
            ExperimentReport rep;
            rep.name = "histories";
            rep.master_seed = g.seed;
            rep.parameters = {{"levels", hist_n}, {"m", hist_m}, {"trials", hist_trials}};
            if (!hist_m.empty()) {
                HistoryVector h{hist_n, parse_counts(hist_m)};
                const BigUint cnt = history_count(h);
                std::cout << "histories " << cnt.to_decimal() << " probability "
                          << history_probability(h) << '\n';
                rep.add("count", "interleavings realizing the upcrossing profile", "plumbing",
                        cnt.to_double(), "recorded", true);
                rep.add("probability", "per-history probability", "plumbing",
                        history_probability(h), "recorded", true);
            }
            if (hist_trials > 0) {
                Rng rng(g.seed, 0);
                double mean_len = 0.0;
                std::size_t truncated = 0;
                for (std::size_t i = 0; i < hist_trials; ++i) {
                    const ChainSample s = level_chain_sample(hist_n, rng);
                    mean_len += static_cast<double>(s.history.length());
                    truncated += s.truncated ? 1 : 0;
                }
                rep.add("chain-mean-length", "average level-history length", "plumbing",
                        mean_len / static_cast<double>(hist_trials), "recorded", true);
                rep.add("chain-truncations", "all sampled chains absorbed", "analytic",
                        static_cast<double>(truncated), "= 0", truncated == 0);
            }
            if (hist_stirling_a > 0.0 && !g.out_dir.empty()) {
                std::filesystem::create_directories(g.out_dir);
                std::ofstream f(std::filesystem::path(g.out_dir) / "stirling.csv",
                                std::ios::binary);
                f << "k,ratio\n";
                for (int k = 2; k <= 100; ++k)
                    f << k << ',' << stirling_band(hist_stirling_a, k) << '\n';
            }
            return finish(g, std::move(rep));
        }
        if (*c_qn) {
            ExperimentReport rep;
            rep.name = "qn";
            rep.master_seed = g.seed;
            rep.parameters = {{"a", qn_a}, {"levels", qn_n}, {"oracle", qn_oracle}};
            const double dp = successful_prob_dp(qn_a, qn_n);
            rep.add("log-mass-dp", "admissible-history mass, forward recursion", "plumbing", dp,
                    "recorded", true);
            rep.add("exponent-ratio-radius", "decay exponent over a log r_0", "plumbing",
                    -dp / (qn_a * RadiiSchedule::paper(qn_n).log_radius(0)), "recorded", true);
            rep.add("exponent-ratio-factorial", "decay exponent over 3a log n!", "plumbing",
                    -dp / (3.0 * qn_a * std::lgamma(qn_n + 1.0)), "recorded", true);
            if (qn_oracle) {
                const double bf = log_qn_bruteforce(qn_a, qn_n);
                const double rel = std::fabs(dp - bf) / std::max(1.0, std::fabs(bf));
                rep.add("dp-vs-enumeration", "recursion equals exact enumeration", "analytic",
                        rel, "<= 1e-12 (log-relative)", rel <= 1e-12);
            }
            return finish(g, std::move(rep));
        }
        if (*c_et) {
            et.threads = g.threads;
            return finish(g, erdos_taylor_scan(et, g.seed));
        }
        if (*c_sp) {
            sp.threads = g.threads;
            return finish(g, spectrum_scan(sp, g.seed));
        }
        if (*c_su) {
            su.threads = g.threads;
            return finish(g, successful_points_scan(su, g.seed));
        }
        if (*c_dc) {
            dc.threads = g.threads;
            return finish(g, decoupling_probe(dc, g.seed));
        }
        if (*c_ver) {
            VerifyConfig vc;
            vc.threads = g.threads;
            const ReportBundle bundle = verify_all(g.seed, vc);
            emit(g, bundle);
            return bundle.all_passed() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
