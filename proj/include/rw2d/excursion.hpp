#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rw2d/point.hpp"

namespace rw2d {

/// Decreasing concentric radii r_0 > r_1 > ... > r_n around a center.
///
/// paper mode is the schedule r_k = e^n * n^{3(n-k)} with K = 16 r_0; its
/// radii overflow doubles already for moderate n, so it is kept in log
/// space and used for schedule arithmetic only. desk mode, r_k =
/// r_min * rho^{n-k}, is the structural analog used by every simulation.
class RadiiSchedule {
public:
    enum class Mode { paper, desk };

    static RadiiSchedule paper(int levels);
    static RadiiSchedule desk(double r_min, double rho, int levels);

    Mode mode() const { return mode_; }
    int levels() const { return n_; }
    double ratio() const; // r_k / r_{k+1}: rho, resp. n^3

    /// log r_k, exact in both modes.
    double log_radius(int k) const;
    double log_boundary_radius() const; // log K, K = 16 r_0

    /// r_k as a double; throws in paper mode when not representable.
    double radius(int k) const;
    double boundary_radius() const; // K = 16 r_0, desk mode

    double r_min() const { return r_min_; }
    double rho() const { return rho_; }

private:
    RadiiSchedule() = default;
    Mode mode_ = Mode::desk;
    int n_ = 0;
    double r_min_ = 0.0, rho_ = 0.0;
};

struct ExcursionSegment {
    int level = 0;
    bool downward = false; // outer ring -> inner ring
    std::uint64_t t_begin = 0, t_end = 0;
    LatticePoint p_begin, p_end;
};

/// Per-level traversal counter around one center.
///
/// Level k (1-based) is the annulus between the rings at r_{k-1} (outer)
/// and r_k (inner), where a "ring" at radius r is the exterior boundary
/// of D(center, r). A downcrossing N_k completes when the walk, having
/// last touched the outer ring at that level, first reaches the inner
/// ring; partial traversals at the end of a trajectory are not counted.
/// Upcrossings U_k are counted symmetrically.
class ExcursionTracker {
public:
    ExcursionTracker(LatticePoint center, const RadiiSchedule& schedule,
                     bool record_segments = false);

    void observe(const LatticePoint& p);

    std::uint64_t down_count(int level) const { return down_.at(static_cast<std::size_t>(level)); }
    std::uint64_t up_count(int level) const { return up_.at(static_cast<std::size_t>(level)); }
    /// N_1..N_n.
    std::vector<std::uint64_t> down_counts() const;

    const LatticePoint& center() const { return center_; }
    int levels() const { return n_; }
    std::uint64_t steps_seen() const { return time_; }
    const std::vector<ExcursionSegment>& segments() const { return segments_; }

    /// Squared radius of the outermost ring band; positions farther out
    /// cannot touch any ring (useful as a multiplexer prefilter).
    double outer_band_sq() const { return outer_band_sq_; }

private:
    enum class Side : std::uint8_t { none, outer, inner };

    int ring_index(const LatticePoint& p, std::int64_t d2) const;

    LatticePoint center_;
    int n_ = 0;
    std::vector<double> r_;        // r_0..r_n
    std::vector<double> r2_;       // r_k^2
    std::vector<double> band_hi_;  // (r_k + 1)^2
    double outer_band_sq_ = 0.0;
    std::vector<Side> state_;               // per level 1..n
    std::vector<std::uint64_t> down_, up_;  // per level 1..n
    std::vector<std::uint64_t> since_t_;    // time the current side was entered
    std::vector<LatticePoint> since_p_;
    std::uint64_t time_ = 0;
    bool record_segments_ = false;
    std::vector<ExcursionSegment> segments_;
};

/// Target excursion profile frak(k) = 3 a k^2 log k with the threshold
/// level k0 = max(4, first k with frak(k) >= 2k).
struct SuccessCriterion {
    double a = 1.0;
    int n = 1;

    double frak(int k) const;
    int k0() const;
};

/// N_k == 1 below k0; frak(k) - k <= N_k <= frak(k) + k from k0 up
/// (inclusive band with real endpoints).
bool is_n_successful(std::span<const std::uint64_t> counts, const SuccessCriterion& c);

/// Smallest m <= n with D(x,r_m) and D(y,r_m) disjoint as lattice point
/// sets (exact membership test); nullopt when none, in particular x == y.
std::optional<int> separation_level(const LatticePoint& x, const LatticePoint& y,
                                    const RadiiSchedule& schedule);

/// Exact lattice-disk disjointness.
bool disks_disjoint(const LatticePoint& x, const LatticePoint& y, double r);

} // namespace rw2d
