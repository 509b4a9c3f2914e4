#pragma once
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace rw2d {

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const LatticePoint& a, const LatticePoint& b) {
        return !(a == b);
    }
    // Lexicographic (x, then y); also the tie-break order for argmax points.
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

inline std::int64_t dist2(const LatticePoint& a, const LatticePoint& b) {
    const std::int64_t dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline std::int64_t norm2(const LatticePoint& p) { return p.x * p.x + p.y * p.y; }

struct PointHash {
    std::size_t operator()(const LatticePoint& p) const {
        std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(p.y) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
    }
};

using PointSet = std::unordered_set<LatticePoint, PointHash>;

/// Open Euclidean lattice disk D(c,r) = { p : |p-c| < r }.
///
/// Membership compares the exact integer squared distance against r^2 in
/// double precision. With dyadic radii (integers, halves, ...) r^2 is exact
/// and the strict inequality is decided without rounding, so e.g.
/// (1,0) is never a member of D(0,1).
struct DiskSpec {
    LatticePoint center;
    double radius = 1.0;

    DiskSpec() = default;
    DiskSpec(LatticePoint c, double r) : center(c), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("DiskSpec: radius must be > 0");
    }

    double radius_sq() const { return radius * radius; }

    bool contains(const LatticePoint& p) const {
        return static_cast<double>(dist2(p, center)) < radius_sq();
    }
};

inline std::array<LatticePoint, 4> axis_neighbors(const LatticePoint& p) {
    return {LatticePoint{p.x + 1, p.y}, LatticePoint{p.x - 1, p.y},
            LatticePoint{p.x, p.y + 1}, LatticePoint{p.x, p.y - 1}};
}

/// All lattice points of D(c,r), row-major (x ascending, then y).
inline std::vector<LatticePoint> disk_points(const DiskSpec& d) {
    std::vector<LatticePoint> pts;
    const auto r = static_cast<std::int64_t>(d.radius) + 1;
    pts.reserve(static_cast<std::size_t>(3.3 * d.radius * d.radius) + 8);
    for (std::int64_t x = d.center.x - r; x <= d.center.x + r; ++x)
        for (std::int64_t y = d.center.y - r; y <= d.center.y + r; ++y)
            if (d.contains({x, y})) pts.push_back({x, y});
    return pts;
}

/// Exterior boundary: points outside A with an axis neighbor in A
/// (so at Euclidean distance exactly 1 from A). Sorted for determinism.
std::vector<LatticePoint> boundary_of(const std::vector<LatticePoint>& domain);
std::vector<LatticePoint> boundary_of(const PointSet& domain);

} // namespace rw2d
