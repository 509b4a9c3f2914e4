#include "rw2d/excursion.hpp"

#include <cmath>
#include <stdexcept>

namespace rw2d {

RadiiSchedule RadiiSchedule::paper(int levels) {
    if (levels < 1) throw std::invalid_argument("RadiiSchedule: levels must be >= 1");
    RadiiSchedule s;
    s.mode_ = Mode::paper;
    s.n_ = levels;
    return s;
}

RadiiSchedule RadiiSchedule::desk(double r_min, double rho, int levels) {
    if (levels < 1) throw std::invalid_argument("RadiiSchedule: levels must be >= 1");
    if (!(r_min > 0.0)) throw std::invalid_argument("RadiiSchedule: r_min must be > 0");
    if (!(rho >= 2.0)) throw std::invalid_argument("RadiiSchedule: rho must be >= 2");
    RadiiSchedule s;
    s.mode_ = Mode::desk;
    s.n_ = levels;
    s.r_min_ = r_min;
    s.rho_ = rho;
    return s;
}

double RadiiSchedule::ratio() const {
    if (mode_ == Mode::desk) return rho_;
    return std::pow(static_cast<double>(n_), 3.0);
}

double RadiiSchedule::log_radius(int k) const {
    if (k < 0 || k > n_) throw std::invalid_argument("RadiiSchedule: level out of range");
    if (mode_ == Mode::desk)
        return std::log(r_min_) + static_cast<double>(n_ - k) * std::log(rho_);
    const double n = static_cast<double>(n_);
    return n + 3.0 * static_cast<double>(n_ - k) * std::log(n);
}

double RadiiSchedule::log_boundary_radius() const {
    return std::log(16.0) + log_radius(0);
}

double RadiiSchedule::radius(int k) const {
    const double lg = log_radius(k);
    if (lg > 700.0) throw std::domain_error("RadiiSchedule: radius not representable; use log_radius");
    if (mode_ == Mode::desk) return r_min_ * std::pow(rho_, static_cast<double>(n_ - k));
    return std::exp(lg);
}

double RadiiSchedule::boundary_radius() const { return 16.0 * radius(0); }

ExcursionTracker::ExcursionTracker(LatticePoint center, const RadiiSchedule& schedule,
                                   bool record_segments)
    : center_(center), n_(schedule.levels()), record_segments_(record_segments) {
    if (schedule.mode() != RadiiSchedule::Mode::desk)
        throw std::invalid_argument("ExcursionTracker: needs a desk-mode schedule");
    if (schedule.r_min() < 1.0)
        throw std::invalid_argument("ExcursionTracker: r_min < 1 makes ring bands overlap");
    r_.resize(static_cast<std::size_t>(n_) + 1);
    r2_.resize(r_.size());
    band_hi_.resize(r_.size());
    for (int k = 0; k <= n_; ++k) {
        r_[static_cast<std::size_t>(k)] = schedule.radius(k);
        r2_[static_cast<std::size_t>(k)] = r_[static_cast<std::size_t>(k)] * r_[static_cast<std::size_t>(k)];
        band_hi_[static_cast<std::size_t>(k)] =
            (r_[static_cast<std::size_t>(k)] + 1.0) * (r_[static_cast<std::size_t>(k)] + 1.0);
    }
    outer_band_sq_ = band_hi_[0];
    state_.assign(static_cast<std::size_t>(n_) + 1, Side::none);
    down_.assign(static_cast<std::size_t>(n_) + 1, 0);
    up_.assign(static_cast<std::size_t>(n_) + 1, 0);
    since_t_.assign(static_cast<std::size_t>(n_) + 1, 0);
    since_p_.assign(static_cast<std::size_t>(n_) + 1, center);
}

// Ring at radius-index i, or -1. Bands [r_i^2, (r_i+1)^2) are disjoint
// for r_min >= 1, rho >= 2, so at most one candidate exists.
int ExcursionTracker::ring_index(const LatticePoint& p, std::int64_t d2) const {
    const double d2d = static_cast<double>(d2);
    if (d2d >= outer_band_sq_) return -1;
    for (int i = 0; i <= n_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (d2d >= r2_[ui]) {
            if (d2d >= band_hi_[ui]) return -1; // between ring bands
            // confirm: some axis neighbor strictly inside D(center, r_i)
            for (const auto& q : axis_neighbors(p))
                if (static_cast<double>(dist2(q, center_)) < r2_[ui]) return i;
            return -1;
        }
    }
    return -1; // strictly inside the innermost disk
}

void ExcursionTracker::observe(const LatticePoint& p) {
    const std::uint64_t t = time_++;
    const std::int64_t d2 = dist2(p, center_);
    const int i = ring_index(p, d2);
    if (i < 0) return;

    // Ring i is the inner ring of level i and the outer ring of level i+1.
    if (i >= 1) {
        const auto lv = static_cast<std::size_t>(i);
        if (state_[lv] == Side::outer) {
            ++down_[lv];
            if (record_segments_)
                segments_.push_back({i, true, since_t_[lv], t, since_p_[lv], p});
        }
        if (state_[lv] != Side::inner) {
            state_[lv] = Side::inner;
            since_t_[lv] = t;
            since_p_[lv] = p;
        }
    }
    if (i + 1 <= n_) {
        const auto lv = static_cast<std::size_t>(i + 1);
        if (state_[lv] == Side::inner) {
            ++up_[lv];
            if (record_segments_)
                segments_.push_back({i + 1, false, since_t_[lv], t, since_p_[lv], p});
        }
        if (state_[lv] != Side::outer) {
            state_[lv] = Side::outer;
            since_t_[lv] = t;
            since_p_[lv] = p;
        }
    }
}

std::vector<std::uint64_t> ExcursionTracker::down_counts() const {
    return {down_.begin() + 1, down_.end()};
}

double SuccessCriterion::frak(int k) const {
    if (k < 1) throw std::invalid_argument("frak: k must be >= 1");
    return 3.0 * a * static_cast<double>(k) * static_cast<double>(k) *
           std::log(static_cast<double>(k));
}

int SuccessCriterion::k0() const {
    if (!(a > 0.0)) throw std::invalid_argument("k0: a must be > 0");
    for (int k = 1; k <= 1 << 20; ++k)
        if (frak(k) >= 2.0 * k) return std::max(4, k);
    throw std::logic_error("k0: threshold not reached");
}

bool is_n_successful(std::span<const std::uint64_t> counts, const SuccessCriterion& c) {
    if (static_cast<int>(counts.size()) != c.n)
        throw std::invalid_argument("is_n_successful: counts length must equal n");
    const int kz = c.k0();
    for (int k = 1; k <= c.n; ++k) {
        const auto nk = static_cast<double>(counts[static_cast<std::size_t>(k - 1)]);
        if (k < kz) {
            if (nk != 1.0) return false;
        } else {
            const double f = c.frak(k);
            if (nk < f - k || nk > f + k) return false;
        }
    }
    return true;
}

bool disks_disjoint(const LatticePoint& x, const LatticePoint& y, double r) {
    const double d2 = static_cast<double>(dist2(x, y));
    const double four_r2 = 4.0 * r * r;
    if (d2 >= four_r2) return true; // centers at least 2r apart
    // If the real disks overlap by more than a lattice cell the lens is
    // guaranteed to contain a lattice point.
    const double d = std::sqrt(d2);
    if (d + 1.4142135624 < 2.0 * r - 1e-9) return false;
    // Thin-lens case: enumerate the bounding-box intersection exactly.
    const auto ri = static_cast<std::int64_t>(std::ceil(r));
    const std::int64_t lox = std::max(x.x - ri, y.x - ri), hix = std::min(x.x + ri, y.x + ri);
    const std::int64_t loy = std::max(x.y - ri, y.y - ri), hiy = std::min(x.y + ri, y.y + ri);
    const double r2 = r * r;
    for (std::int64_t px = lox; px <= hix; ++px)
        for (std::int64_t py = loy; py <= hiy; ++py) {
            const LatticePoint p{px, py};
            if (static_cast<double>(dist2(p, x)) < r2 && static_cast<double>(dist2(p, y)) < r2)
                return false;
        }
    return true;
}

std::optional<int> separation_level(const LatticePoint& x, const LatticePoint& y,
                                    const RadiiSchedule& schedule) {
    if (x == y) return std::nullopt;
    for (int m = 0; m <= schedule.levels(); ++m) {
        double rm;
        if (schedule.mode() == RadiiSchedule::Mode::desk) {
            rm = schedule.radius(m);
        } else {
            const double lg = schedule.log_radius(m);
            if (lg > 700.0) continue; // astronomically large disks always intersect here
            rm = std::exp(lg);
        }
        if (disks_disjoint(x, y, rm)) return m;
    }
    return std::nullopt;
}

} // namespace rw2d
