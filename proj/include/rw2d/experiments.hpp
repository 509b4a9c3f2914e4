#pragma once
#include <cstdint>
#include <vector>

#include "rw2d/point.hpp"
#include "rw2d/report.hpp"

namespace rw2d {

/// Exact-solve comparisons: Green table spot values, log-asymptotics of
/// G(0,0), crossing formulas on annuli, half-crossing balance, and the
/// interior uniformity of the exit law. No Monte Carlo.
struct PotentialSuiteConfig {
    double annulus_r = 10.0, annulus_R = 100.0;
    LatticePoint annulus_x{30, 0};
    LatticePoint annulus_x_mid{32, 0}; // near sqrt(r R)
    double hit_R = 200.0;
    LatticePoint hit_x{20, 0};
    std::vector<double> asym_radii{25.0, 50.0, 100.0, 200.0};
    double half_mid = 50.0, half_rho = 4.0;
    std::vector<double> half_trend_mids{25.0, 50.0, 100.0};
    double harnack_R = 60.0;
    std::vector<double> harnack_eps{0.3, 0.2, 0.1};
    std::size_t harnack_probes = 20;
};
ExperimentReport potential_suite(const PotentialSuiteConfig& cfg, std::uint64_t seed);

/// Monte Carlo law of the origin local time until exit of D(0,R),
/// against the exact zero-inflated geometric law.
struct LocalTimeSuiteConfig {
    double R = 100.0;
    LatticePoint x0{10, 0};
    std::size_t trials = 100000;
    std::vector<double> phis{0.25, 0.5, 1.0};
    std::vector<double> tail_z{1.0, 2.0, 3.0};
    double tail_c = 4.0; // fixture constant for the sqrt(z) e^{-z} tail
    double chi2_significance = 0.001;
    int threads = 0;
};
ExperimentReport local_time_suite(const LocalTimeSuiteConfig& cfg, std::uint64_t seed);

/// Conditional law of the next-deeper excursion count against the
/// m-fold fair negative binomial.
struct ExcursionLawConfig {
    double inner_radius = 6.0;
    double rho = 8.0;
    std::vector<int> conditioned_m{1, 2};
    std::size_t trials_per_m = 50000;
    double tv_tol = 0.05; // fixture
    int threads = 0;
};
ExperimentReport excursion_law_suite(const ExcursionLawConfig& cfg, std::uint64_t seed);

/// Most-visited-site ratio L*/(log R)^2 across radii. Trend only; the
/// almost-sure limit is out of reach at these scales and is reported as
/// unverified.
struct ErdosTaylorConfig {
    std::vector<double> radii{128.0, 256.0, 512.0};
    std::size_t trials = 50;
    double band_lo = 0.3, band_hi = 1.6; // multiples of 2/pi, fixture
    int threads = 0;
};
ExperimentReport erdos_taylor_scan(const ErdosTaylorConfig& cfg, std::uint64_t seed);

/// Thick-point counts |Psi_R(a)| and the growth exponent in R.
struct SpectrumConfig {
    std::vector<double> radii{128.0, 256.0, 512.0};
    std::vector<double> a_grid{0.25, 0.5, 0.75, 1.0};
    double slope_a = 0.5;
    double slope_center = 1.5, slope_tol = 0.3; // fixture band around 2 - a
    std::size_t trials = 100;
    double cheb_eps = 0.25, cheb_c = 3.0; // fixture for the tail-frequency bound
    std::size_t cheb_points = 16;
    int threads = 0;
};
ExperimentReport spectrum_scan(const SpectrumConfig& cfg, std::uint64_t seed);

/// n-successful census over a center grid: frequency against the
/// admissible-history mass, and the local-time advantage of successful
/// centers.
struct SuccessfulConfig {
    double r_min = 4.0, rho = 3.0;
    int levels = 4;
    double a_directional = 0.12; // smallest band the census can observe
    std::vector<double> a_grid{0.25, 0.5, 1.0};
    double a_infeasible = 1.9;
    std::size_t trials = 24;
    int center_grid = 6; // center_grid^2 centers in [2 r_0, 3 r_0]^2
    int threads = 0;
};
ExperimentReport successful_points_scan(const SuccessfulConfig& cfg, std::uint64_t seed);

/// Sensitivity of deep excursion counts to the entry point on the middle
/// ring, per radius ratio.
struct DecouplingConfig {
    double inner_radius = 6.0;
    std::vector<double> rhos{2.0, 4.0, 8.0};
    std::size_t samples = 100000;
    double tv_tol_largest_rho = 0.1; // fixture
    double tv_tol_control = 0.02;    // fixture: same-entry sampling noise
    std::size_t min_samples = 1000;  // fewer -> censored cells
    int threads = 0;
};
ExperimentReport decoupling_probe(const DecouplingConfig& cfg, std::uint64_t seed);

struct VerifyConfig {
    int threads = 0;
};

/// The union of all suites at default configs; deterministic given the
/// seed, independent of the thread count.
ReportBundle verify_all(std::uint64_t seed, const VerifyConfig& cfg = {});

} // namespace rw2d
