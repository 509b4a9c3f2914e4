#include "rw2d/point.hpp"

#include <algorithm>

namespace rw2d {

static std::vector<LatticePoint> boundary_impl(const PointSet& in) {
    if (in.empty()) throw std::invalid_argument("boundary_of: empty domain");
    PointSet out;
    for (const auto& p : in)
        for (const auto& q : axis_neighbors(p))
            if (!in.count(q)) out.insert(q);
    std::vector<LatticePoint> res(out.begin(), out.end());
    std::sort(res.begin(), res.end());
    return res;
}

std::vector<LatticePoint> boundary_of(const PointSet& domain) {
    return boundary_impl(domain);
}

std::vector<LatticePoint> boundary_of(const std::vector<LatticePoint>& domain) {
    PointSet in(domain.begin(), domain.end());
    return boundary_impl(in);
}

} // namespace rw2d
