#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

#include "rw2d/point.hpp"
#include "rw2d/rng.hpp"

namespace rw2d {

constexpr std::uint64_t kDefaultStepCap = 1'000'000'000ULL;

/// Simple random walk state. One unit step per call, uniform over the
/// four axis directions, fully determined by the rng stream.
struct WalkState {
    LatticePoint position;
    std::uint64_t step_count = 0;
    Rng rng;

    WalkState() = default;
    WalkState(LatticePoint start, Rng stream) : position(start), rng(stream) {}
};

inline void random_step(WalkState& s) {
    static constexpr std::int64_t dx[4] = {1, -1, 0, 0};
    static constexpr std::int64_t dy[4] = {0, 0, 1, -1};
    const unsigned d = s.rng.step_direction();
    s.position.x += dx[d];
    s.position.y += dy[d];
    ++s.step_count;
}

struct ExitResult {
    LatticePoint exit_point;
    std::uint64_t exit_time = 0;
    bool truncated = false; // step cap reached before leaving the domain
};

/// Run until the walk first leaves `domain`. The observer sees every
/// position in trajectory order, including the start and the exit point
/// (exit_time + 1 positions in total). Throws if the start is outside.
template <class Observer>
ExitResult walk_until_exit(WalkState& s, const DiskSpec& domain, Observer&& observe,
                           std::uint64_t step_cap = kDefaultStepCap) {
    if (!domain.contains(s.position))
        throw std::invalid_argument("walk_until_exit: start position outside domain");
    const std::uint64_t t0 = s.step_count;
    observe(s.position);
    while (s.step_count - t0 < step_cap) {
        random_step(s);
        observe(s.position);
        if (!domain.contains(s.position))
            return {s.position, s.step_count - t0, false};
    }
    return {s.position, s.step_count - t0, true};
}

/// Convenience overload taking a list of type-erased observers.
ExitResult walk_until_exit(WalkState& s, const DiskSpec& domain,
                           const std::vector<std::function<void(LatticePoint)>>& observers,
                           std::uint64_t step_cap = kDefaultStepCap);

} // namespace rw2d
