#include "rw2d/walk.hpp"

namespace rw2d {

ExitResult walk_until_exit(WalkState& s, const DiskSpec& domain,
                           const std::vector<std::function<void(LatticePoint)>>& observers,
                           std::uint64_t step_cap) {
    return walk_until_exit(
        s, domain,
        [&observers](LatticePoint p) {
            for (const auto& f : observers) f(p);
        },
        step_cap);
}

} // namespace rw2d
