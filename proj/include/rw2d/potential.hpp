#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rw2d/point.hpp"

namespace rw2d {

/// Finite lattice domain with indexed points and a 4-neighbor table.
/// Index -1 marks a neighbor outside the domain.
class LatticeDomain {
public:
    explicit LatticeDomain(std::vector<LatticePoint> pts);
    static LatticeDomain disk(const DiskSpec& d) { return LatticeDomain(disk_points(d)); }

    std::size_t size() const { return points_.size(); }
    const std::vector<LatticePoint>& points() const { return points_; }
    const LatticePoint& point(std::size_t i) const { return points_[i]; }
    std::int32_t index_of(const LatticePoint& p) const {
        auto it = index_.find(p);
        return it == index_.end() ? -1 : it->second;
    }
    const std::array<std::int32_t, 4>& neighbors(std::size_t i) const { return nbr_[i]; }

    /// y = (I - P) x with P the walk restricted to the domain.
    void apply_operator(const std::vector<double>& x, std::vector<double>& y) const;

private:
    std::vector<LatticePoint> points_;
    std::unordered_map<LatticePoint, std::int32_t, PointHash> index_;
    std::vector<std::array<std::int32_t, 4>> nbr_;
};

struct SolveStats {
    double residual_max = 0.0; // max-norm defect of the defining relation
    std::size_t iterations = 0;
};

/// Conjugate gradient solve of (I - P) u = rhs, deterministic sweep order.
/// Throws on non-convergence, reporting the residual reached.
std::vector<double> cg_solve(const LatticeDomain& dom, const std::vector<double>& rhs,
                             double tol_max_norm, SolveStats* stats = nullptr,
                             std::size_t max_iterations = 1'000'000);

/// One column of the Green's function: g[i] = G_A(p_i, source).
/// By symmetry this is also the row G_A(source, .).
std::vector<double> green_column(const LatticeDomain& dom, const LatticePoint& source,
                                 double tol = 1e-12, SolveStats* stats = nullptr);

/// Dense Green's table for small domains (direct Cholesky, |A| <= 2000).
struct GreenTable {
    std::vector<LatticePoint> points;
    std::vector<double> values; // n x n row-major, symmetric
    double residual = 0.0;      // max defining-relation defect
    double symmetry_defect = 0.0;

    std::size_t size() const { return points.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * points.size() + j]; }
    double value(const LatticePoint& x, const LatticePoint& y) const;
    std::string to_csv() const; // columns: x,y,value (rows of G against first column point)
};

GreenTable green(const std::vector<LatticePoint>& domain, double tol = 1e-10);

/// Harmonic extension: solves h = P h on `free_points` with h given by
/// `boundary_value` outside. Used for all first-passage probabilities.
std::vector<double> harmonic_solve(const LatticeDomain& free_points,
                                   const std::function<double(const LatticePoint&)>& boundary_value,
                                   double tol = 1e-12, SolveStats* stats = nullptr);

/// Exit law of the domain: pmf over boundary_of(domain) for the walk
/// started at `start`, via the last-step decomposition of the Green row.
struct BoundaryPmf {
    std::vector<LatticePoint> boundary; // sorted
    std::vector<double> prob;
    double sum = 0.0;

    double at(const LatticePoint& y) const;
    std::string to_csv() const;
};

BoundaryPmf hitting_distribution(const LatticeDomain& dom, const LatticePoint& start,
                                 double tol = 5e-14);

/// P^x(T_0 < T_exit of D(0,R)) as the Green ratio G(x,0)/G(0,0).
double hit_origin_before_exit(const LatticePoint& x, double R, double tol = 1e-12);

/// Same probability from the direct Dirichlet problem (independent route).
double hit_origin_before_exit_direct(const LatticePoint& x, double R, double tol = 1e-12);

struct AnnulusCrossing {
    double p_exit_outer = 0.0; // reach D(0,R)^c before entering D(0,r)
    double p_hit_inner = 0.0;  // enter D(0,r) before leaving D(0,R)
};

/// Exact two-sided solve on the annulus D(0,R) \ D(0,r); requires r < |x| < R.
AnnulusCrossing annulus_crossing(const LatticePoint& x, double r, double R, double tol = 1e-12);

struct HalfStep {
    double p_up = 0.0;   // reach the ring at rho*mid_r before the ring at mid_r/rho
    double p_down = 0.0; // complementary solve
};

/// Middle-of-three-rings crossing probability, averaged over the start
/// ring boundary_of(D(0,mid_r)). Continuum value is exactly 1/2.
HalfStep annulus_half_step(double mid_r, double rho, double tol = 1e-12);

struct LocalTimeLaw {
    double p_hit = 0.0;         // P^x0(T_0 < T_exit)
    double green_mean = 0.0;    // G_{D(0,R)}(0,0), the conditional mean
    double g_x0 = 0.0;          // G_{D(0,R)}(x0,0)

    /// Laplace transform E^x0 exp(-phi * L^0 / G(0,0)); phi > 0.
    double laplace(double phi) const;
};

LocalTimeLaw local_time_law(const LatticePoint& x0, double R, double tol = 1e-12);

struct PotentialConstants {
    double slope_hat = 0.0; // fitted coefficient of log R
    double gamma_hat = 0.0; // fitted intercept
    std::vector<double> radii;
    std::vector<double> g00; // G_{D(0,R)}(0,0) per radius
};

/// Least-squares fit of G_{D(0,R)}(0,0) against log R.
PotentialConstants green_asymptotics(const std::vector<double>& radii, double tol = 1e-12);

struct HarnackProbe {
    double max_ratio = 0.0;
    std::vector<LatticePoint> probes;
};

/// Max over probe pairs x,x' in D(0,eps*R) and boundary points y of
/// H(x,y)/H(x',y) for the exit law of D(0,R). Probes cover the extreme
/// radii of the inner disk, plus the center.
HarnackProbe harnack_ratio(double R, double eps, std::size_t probe_points, double tol = 5e-14);

} // namespace rw2d
