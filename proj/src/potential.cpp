#include "rw2d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rw2d/stats.hpp"

namespace rw2d {

LatticeDomain::LatticeDomain(std::vector<LatticePoint> pts) : points_(std::move(pts)) {
    if (points_.empty()) throw std::invalid_argument("LatticeDomain: empty point set");
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    index_.reserve(points_.size() * 2);
    for (std::size_t i = 0; i < points_.size(); ++i)
        index_.emplace(points_[i], static_cast<std::int32_t>(i));
    nbr_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto nb = axis_neighbors(points_[i]);
        for (int k = 0; k < 4; ++k) nbr_[i][k] = index_of(nb[k]);
    }
}

void LatticeDomain::apply_operator(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = points_.size();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const std::int32_t j : nbr_[i])
            if (j >= 0) acc += x[static_cast<std::size_t>(j)];
        y[i] = x[i] - 0.25 * acc;
    }
}

std::vector<double> cg_solve(const LatticeDomain& dom, const std::vector<double>& rhs,
                             double tol_max_norm, SolveStats* stats,
                             std::size_t max_iterations) {
    const std::size_t n = dom.size();
    if (rhs.size() != n) throw std::invalid_argument("cg_solve: rhs size mismatch");
    std::vector<double> x(n, 0.0), r = rhs, p = rhs, q(n);

    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::fabs(t));
        return m;
    };
    auto true_residual = [&](std::vector<double>& out) {
        dom.apply_operator(x, out);
        for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] - out[i];
    };

    double rho = 0.0;
    for (double t : r) rho += t * t;
    double rmax = max_abs(r);
    std::size_t it = 0;
    while (rmax > tol_max_norm && it < max_iterations) {
        dom.apply_operator(p, q);
        double pq = 0.0;
        for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
        if (pq <= 0.0) break; // operator is SPD; zero curvature means we are done
        const double alpha = rho / pq;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        double rho_next = 0.0;
        rmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] -= alpha * q[i];
            rho_next += r[i] * r[i];
            rmax = std::max(rmax, std::fabs(r[i]));
        }
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        ++it;
        // Guard against accumulated drift in the recurrence residual.
        if (rmax <= tol_max_norm || it % 256 == 0) {
            true_residual(r);
            rho = 0.0;
            for (double t : r) rho += t * t;
            rmax = max_abs(r);
            p = r; // restart direction after re-evaluating
        }
    }
    std::vector<double> rfin(n);
    true_residual(rfin);
    const double final_max = max_abs(rfin);
    if (stats) {
        stats->residual_max = final_max;
        stats->iterations = it;
    }
    if (final_max > tol_max_norm) {
        std::ostringstream os;
        os << "cg_solve: no convergence after " << it << " iterations, residual "
           << final_max << " > tol " << tol_max_norm;
        throw std::runtime_error(os.str());
    }
    return x;
}

std::vector<double> green_column(const LatticeDomain& dom, const LatticePoint& source,
                                 double tol, SolveStats* stats) {
    const std::int32_t s = dom.index_of(source);
    if (s < 0) throw std::invalid_argument("green_column: source outside domain");
    std::vector<double> rhs(dom.size(), 0.0);
    rhs[static_cast<std::size_t>(s)] = 1.0;
    return cg_solve(dom, rhs, tol, stats);
}

namespace {

// In-place dense Cholesky A = L L^T (lower triangle).
void cholesky(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) throw std::runtime_error("green: matrix not positive definite");
        const double l = std::sqrt(d);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
}

void chol_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * b[k];
        b[ii] = s / l[ii * n + ii];
    }
}

} // namespace

GreenTable green(const std::vector<LatticePoint>& domain, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("green: tol must be > 0");
    LatticeDomain dom(domain);
    const std::size_t n = dom.size();
    if (n > 2000)
        throw std::invalid_argument("green: dense table limited to 2000 points; use green_column");

    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = 1.0;
        for (const std::int32_t j : dom.neighbors(i))
            if (j >= 0) a[i * n + static_cast<std::size_t>(j)] = -0.25;
    }
    cholesky(a, n);

    GreenTable t;
    t.points = dom.points();
    t.values.assign(n * n, 0.0);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        chol_solve(a, n, col);
        for (std::size_t i = 0; i < n; ++i) t.values[i * n + j] = col[i];
    }

    // Defining relation G = I + P G, checked in max norm, plus symmetry.
    double resid = 0.0, sym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (const std::int32_t k : dom.neighbors(i))
                if (k >= 0) acc += t.values[static_cast<std::size_t>(k) * n + j];
            const double want = (i == j ? 1.0 : 0.0) + 0.25 * acc;
            resid = std::max(resid, std::fabs(t.values[i * n + j] - want));
            sym = std::max(sym, std::fabs(t.values[i * n + j] - t.values[j * n + i]));
        }
    }
    t.residual = resid;
    t.symmetry_defect = sym;
    if (resid > tol) {
        std::ostringstream os;
        os << "green: residual " << resid << " exceeds tol " << tol;
        throw std::runtime_error(os.str());
    }
    return t;
}

double GreenTable::value(const LatticePoint& x, const LatticePoint& y) const {
    auto find = [this](const LatticePoint& p) {
        const auto it = std::lower_bound(points.begin(), points.end(), p);
        if (it == points.end() || !(*it == p))
            throw std::invalid_argument("GreenTable::value: point outside domain");
        return static_cast<std::size_t>(it - points.begin());
    };
    return at(find(x), find(y));
}

std::string GreenTable::to_csv() const {
    std::ostringstream os;
    os << "x,y,value\n";
    const std::size_t n = points.size();
    const std::size_t row = 0; // rows against the first (lexicographically least) point
    for (std::size_t j = 0; j < n; ++j)
        os << points[j].x << ',' << points[j].y << ',' << at(row, j) << '\n';
    return os.str();
}

std::vector<double> harmonic_solve(const LatticeDomain& dom,
                                   const std::function<double(const LatticePoint&)>& boundary_value,
                                   double tol, SolveStats* stats) {
    const std::size_t n = dom.size();
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto nb = axis_neighbors(dom.point(i));
        double acc = 0.0;
        bool any = false;
        for (int k = 0; k < 4; ++k) {
            if (dom.neighbors(i)[k] < 0) {
                acc += boundary_value(nb[k]);
                any = true;
            }
        }
        if (any) rhs[i] = 0.25 * acc;
    }
    return cg_solve(dom, rhs, tol, stats);
}

double BoundaryPmf::at(const LatticePoint& y) const {
    const auto it = std::lower_bound(boundary.begin(), boundary.end(), y);
    if (it == boundary.end() || !(*it == y))
        throw std::invalid_argument("BoundaryPmf::at: not a boundary point");
    return prob[static_cast<std::size_t>(it - boundary.begin())];
}

std::string BoundaryPmf::to_csv() const {
    std::ostringstream os;
    os << "x,y,value\n";
    for (std::size_t i = 0; i < boundary.size(); ++i)
        os << boundary[i].x << ',' << boundary[i].y << ',' << prob[i] << '\n';
    return os.str();
}

BoundaryPmf hitting_distribution(const LatticeDomain& dom, const LatticePoint& start,
                                 double tol) {
    if (dom.index_of(start) < 0)
        throw std::invalid_argument("hitting_distribution: start outside domain");
    const std::vector<double> g = green_column(dom, start, tol);

    BoundaryPmf pmf;
    pmf.boundary = boundary_of(dom.points());
    pmf.prob.resize(pmf.boundary.size(), 0.0);
    for (std::size_t b = 0; b < pmf.boundary.size(); ++b) {
        double acc = 0.0;
        for (const auto& q : axis_neighbors(pmf.boundary[b])) {
            const std::int32_t j = dom.index_of(q);
            if (j >= 0) acc += g[static_cast<std::size_t>(j)];
        }
        pmf.prob[b] = 0.25 * acc;
        pmf.sum += pmf.prob[b];
    }
    return pmf;
}

double hit_origin_before_exit(const LatticePoint& x, double R, double tol) {
    LatticeDomain dom = LatticeDomain::disk(DiskSpec({0, 0}, R));
    if (dom.index_of(x) < 0)
        throw std::invalid_argument("hit_origin_before_exit: x outside D(0,R)");
    const std::vector<double> g = green_column(dom, {0, 0}, tol);
    return g[static_cast<std::size_t>(dom.index_of(x))] /
           g[static_cast<std::size_t>(dom.index_of({0, 0}))];
}

double hit_origin_before_exit_direct(const LatticePoint& x, double R, double tol) {
    const DiskSpec disk({0, 0}, R);
    if (!disk.contains(x))
        throw std::invalid_argument("hit_origin_before_exit_direct: x outside D(0,R)");
    if (x == LatticePoint{0, 0}) return 1.0;
    std::vector<LatticePoint> free;
    for (const auto& p : disk_points(disk))
        if (!(p == LatticePoint{0, 0})) free.push_back(p);
    LatticeDomain dom(std::move(free));
    const auto h = harmonic_solve(
        dom, [](const LatticePoint& q) { return q == LatticePoint{0, 0} ? 1.0 : 0.0; }, tol);
    return h[static_cast<std::size_t>(dom.index_of(x))];
}

AnnulusCrossing annulus_crossing(const LatticePoint& x, double r, double R, double tol) {
    if (!(r > 0.0 && R > r)) throw std::invalid_argument("annulus_crossing: need 0 < r < R");
    const double xr2 = static_cast<double>(norm2(x));
    if (!(xr2 > r * r && xr2 < R * R))
        throw std::invalid_argument("annulus_crossing: x not in the open annulus");
    const DiskSpec outer({0, 0}, R), inner({0, 0}, r);
    std::vector<LatticePoint> free;
    for (const auto& p : disk_points(outer))
        if (!inner.contains(p)) free.push_back(p);
    LatticeDomain dom(std::move(free));
    const std::size_t xi = static_cast<std::size_t>(dom.index_of(x));

    AnnulusCrossing out;
    const auto h_out = harmonic_solve(
        dom, [&outer](const LatticePoint& q) { return outer.contains(q) ? 0.0 : 1.0; }, tol);
    out.p_exit_outer = h_out[xi];
    const auto h_in = harmonic_solve(
        dom, [&inner](const LatticePoint& q) { return inner.contains(q) ? 1.0 : 0.0; }, tol);
    out.p_hit_inner = h_in[xi];
    return out;
}

HalfStep annulus_half_step(double mid_r, double rho, double tol) {
    if (!(rho >= 2.0)) throw std::invalid_argument("annulus_half_step: rho must be >= 2");
    const double r_in = mid_r / rho, r_out = mid_r * rho;
    if (!(r_in >= 1.0)) throw std::invalid_argument("annulus_half_step: inner radius degenerate");

    const DiskSpec inner({0, 0}, r_in), outer({0, 0}, r_out), mid({0, 0}, mid_r);
    const auto ring_in_v = boundary_of(disk_points(inner));
    const PointSet ring_in(ring_in_v.begin(), ring_in_v.end());

    // Free region: strictly inside the outer disk, outside the inner disk
    // and off the inner stopping ring.
    std::vector<LatticePoint> free;
    for (const auto& p : disk_points(outer))
        if (!inner.contains(p) && !ring_in.count(p)) free.push_back(p);
    LatticeDomain dom(std::move(free));

    const auto h_up = harmonic_solve(
        dom, [&outer](const LatticePoint& q) { return outer.contains(q) ? 0.0 : 1.0; }, tol);
    const auto h_down = harmonic_solve(
        dom, [&ring_in](const LatticePoint& q) { return ring_in.count(q) ? 1.0 : 0.0; }, tol);

    const auto start_ring = boundary_of(disk_points(mid));
    HalfStep hs;
    double su = 0.0, sd = 0.0;
    for (const auto& z : start_ring) {
        const std::int32_t i = dom.index_of(z);
        if (i < 0) throw std::invalid_argument("annulus_half_step: start ring not in free region");
        su += h_up[static_cast<std::size_t>(i)];
        sd += h_down[static_cast<std::size_t>(i)];
    }
    hs.p_up = su / static_cast<double>(start_ring.size());
    hs.p_down = sd / static_cast<double>(start_ring.size());
    return hs;
}

double LocalTimeLaw::laplace(double phi) const {
    if (!(phi > 0.0)) throw std::invalid_argument("laplace: phi must be > 0");
    const double g = green_mean;
    return 1.0 - p_hit + p_hit / ((std::exp(phi / g) - 1.0) * g + 1.0);
}

LocalTimeLaw local_time_law(const LatticePoint& x0, double R, double tol) {
    LatticeDomain dom = LatticeDomain::disk(DiskSpec({0, 0}, R));
    if (dom.index_of(x0) < 0)
        throw std::invalid_argument("local_time_law: x0 outside D(0,R)");
    const std::vector<double> g = green_column(dom, {0, 0}, tol);
    LocalTimeLaw law;
    law.green_mean = g[static_cast<std::size_t>(dom.index_of({0, 0}))];
    law.g_x0 = g[static_cast<std::size_t>(dom.index_of(x0))];
    law.p_hit = law.g_x0 / law.green_mean;
    return law;
}

PotentialConstants green_asymptotics(const std::vector<double>& radii, double tol) {
    if (radii.size() < 3) throw std::invalid_argument("green_asymptotics: need >= 3 radii");
    for (double R : radii)
        if (!(R >= 10.0)) throw std::invalid_argument("green_asymptotics: radii must be >= 10");
    PotentialConstants pc;
    pc.radii = radii;
    std::vector<double> lr;
    for (double R : radii) {
        LatticeDomain dom = LatticeDomain::disk(DiskSpec({0, 0}, R));
        const auto g = green_column(dom, {0, 0}, tol);
        pc.g00.push_back(g[static_cast<std::size_t>(dom.index_of({0, 0}))]);
        lr.push_back(std::log(R));
    }
    const LinearFit f = linear_fit(lr, pc.g00);
    pc.slope_hat = f.slope;
    pc.gamma_hat = f.intercept;
    return pc;
}

HarnackProbe harnack_ratio(double R, double eps, std::size_t probe_points, double tol) {
    // The uniformity lemma wants eps < 1/4; the probe itself only needs
    // the inner disk to stay well inside the domain.
    if (!(eps < 1.0)) throw std::invalid_argument("harnack_ratio: eps must be < 1");
    if (!(R * eps >= 2.0)) throw std::invalid_argument("harnack_ratio: eps*R must be >= 2");
    const DiskSpec inner_disk({0, 0}, eps * R);

    // Deterministic probe net: the center plus angular rings at ~55% and
    // ~99% of eps*R. The outermost ring carries the extremal ratios.
    PointSet chosen;
    chosen.insert({0, 0});
    const std::size_t per_ring = std::max<std::size_t>(4, probe_points / 2);
    for (const double f : {0.55, 0.99}) {
        for (std::size_t j = 0; j < per_ring; ++j) {
            const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(per_ring);
            const LatticePoint p{static_cast<std::int64_t>(std::llround(f * eps * R * std::cos(th))),
                                 static_cast<std::int64_t>(std::llround(f * eps * R * std::sin(th)))};
            if (inner_disk.contains(p)) chosen.insert(p);
        }
    }
    HarnackProbe hp;
    hp.probes.assign(chosen.begin(), chosen.end());
    std::sort(hp.probes.begin(), hp.probes.end());
    if (hp.probes.empty()) throw std::invalid_argument("harnack_ratio: no interior probe points");

    LatticeDomain dom = LatticeDomain::disk(DiskSpec({0, 0}, R));
    std::vector<BoundaryPmf> pmfs;
    pmfs.reserve(hp.probes.size());
    for (const auto& x : hp.probes) pmfs.push_back(hitting_distribution(dom, x, tol));

    const std::size_t nb = pmfs.front().boundary.size();
    double worst = 1.0;
    for (std::size_t y = 0; y < nb; ++y) {
        double hi = 0.0, lo = std::numeric_limits<double>::infinity();
        for (const auto& pmf : pmfs) {
            hi = std::max(hi, pmf.prob[y]);
            lo = std::min(lo, pmf.prob[y]);
        }
        if (lo > 0.0) worst = std::max(worst, hi / lo);
    }
    hp.max_ratio = worst;
    return hp;
}

} // namespace rw2d
