#include <doctest.h>

#include <cmath>
#include <vector>

#include "rw2d/excursion.hpp"
#include "rw2d/walk.hpp"

using namespace rw2d;

namespace {

// Straight axis path from (from,0) to (to,0), fed point by point.
void feed_radial(ExcursionTracker& t, std::int64_t from, std::int64_t to) {
    const std::int64_t step = to > from ? 1 : -1;
    for (std::int64_t x = from; x != to + step; x += step) t.observe({x, 0});
}

} // namespace

TEST_CASE("paper schedule identities, checked in log space") {
    const int n = 12;
    const RadiiSchedule s = RadiiSchedule::paper(n);
    const double ln3 = 3.0 * std::log(static_cast<double>(n));
    for (int k = 0; k + 1 <= n; ++k)
        CHECK(s.log_radius(k) - s.log_radius(k + 1) == doctest::Approx(ln3).epsilon(1e-12));
    CHECK(s.log_radius(n) == doctest::Approx(static_cast<double>(n)));     // r_n = e^n
    CHECK(s.log_boundary_radius() - s.log_radius(0) ==
          doctest::Approx(std::log(16.0)).epsilon(1e-12));                 // K / r_0 = 16
    CHECK(s.ratio() == doctest::Approx(std::pow(n, 3.0)));
    // Representable while small, symbolic-only once the exponent blows up.
    CHECK(s.radius(n) == doctest::Approx(std::exp(12.0)));
    CHECK_THROWS_AS(RadiiSchedule::paper(60).radius(0), std::domain_error);
}

TEST_CASE("desk schedule radii and validation") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 3);
    CHECK(s.radius(0) == 32.0);
    CHECK(s.radius(1) == 16.0);
    CHECK(s.radius(2) == 8.0);
    CHECK(s.radius(3) == 4.0);
    CHECK(s.boundary_radius() == 512.0);
    for (int k = 0; k < 3; ++k) CHECK(s.radius(k) > s.radius(k + 1));
    CHECK_THROWS_AS(RadiiSchedule::desk(0.0, 2.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(RadiiSchedule::desk(4.0, 1.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(RadiiSchedule::desk(4.0, 2.0, 0), std::invalid_argument);
}

TEST_CASE("radial in-and-out path crosses every annulus once") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 3);
    ExcursionTracker t({0, 0}, s);
    feed_radial(t, 40, 0);
    for (int k = 1; k <= 3; ++k) {
        CHECK(t.down_count(k) == 1);
        CHECK(t.up_count(k) == 0);
    }
    feed_radial(t, 1, 40);
    for (int k = 1; k <= 3; ++k) {
        CHECK(t.down_count(k) == 1);
        CHECK(t.up_count(k) == 1);
    }
}

TEST_CASE("down-up-down-up yields two completed excursions per level") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 3);
    ExcursionTracker t({0, 0}, s);
    feed_radial(t, 40, 0);
    feed_radial(t, 1, 40);
    feed_radial(t, 39, 0);
    feed_radial(t, 1, 40);
    for (int k = 1; k <= 3; ++k) CHECK(t.down_count(k) == 2);
}

TEST_CASE("partial excursions are not counted") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 3);
    ExcursionTracker t({0, 0}, s);
    feed_radial(t, 40, 9); // stops between the level-2 and level-3 rings
    CHECK(t.down_count(1) == 1);
    CHECK(t.down_count(2) == 0);
    CHECK(t.down_count(3) == 0);
}

TEST_CASE("counts never decrease along a trajectory; completion implies inner position") {
    const RadiiSchedule s = RadiiSchedule::desk(2.0, 2.0, 3); // radii 16,8,4,2
    ExcursionTracker t({0, 0}, s);
    WalkState w({12, 0}, Rng(17, 0));
    std::vector<std::uint64_t> prev(4, 0);
    for (int i = 0; i < 200000; ++i) {
        t.observe(w.position);
        for (int k = 1; k <= 3; ++k) {
            const std::uint64_t nk = t.down_count(k);
            CHECK(nk >= prev[static_cast<std::size_t>(k)]);
            if (nk > prev[static_cast<std::size_t>(k)]) {
                // A completed traversal ends on the inner ring of level k,
                // so the walk sits strictly inside the next-outer disk.
                CHECK(static_cast<double>(norm2(w.position)) <
                      s.radius(k - 1) * s.radius(k - 1));
            }
            prev[static_cast<std::size_t>(k)] = nk;
        }
        random_step(w);
    }
}

TEST_CASE("segment recording captures endpoints in order") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 2); // radii 16,8,4
    ExcursionTracker t({0, 0}, s, true);
    feed_radial(t, 20, 0);
    feed_radial(t, 1, 20);
    const auto& segs = t.segments();
    REQUIRE(segs.size() >= 4); // two levels down, two levels up
    for (const auto& seg : segs) {
        CHECK(seg.t_begin < seg.t_end);
        CHECK(seg.level >= 1);
        CHECK(seg.level <= 2);
    }
    // First completed segment: the level-1 downcrossing from ring 16 to ring 8.
    CHECK(segs.front().level == 1);
    CHECK(segs.front().downward);
    CHECK(segs.front().p_end == LatticePoint{8, 0});
}

TEST_CASE("frak and k0") {
    const SuccessCriterion c1{1.0, 8};
    CHECK(c1.frak(1) == 0.0);
    CHECK(c1.frak(2) == doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-12)); // ~8.3178
    CHECK(c1.k0() == 4); // k=2 already passes, the floor of 4 binds

    // Independent scan oracle across a range of a.
    for (const double a : {0.05, 0.25, 0.5, 1.0, 1.9}) {
        const SuccessCriterion c{a, 8};
        int expect = 0;
        for (int k = 1;; ++k)
            if (3.0 * a * k * k * std::log(static_cast<double>(k)) >= 2.0 * k) {
                expect = std::max(4, k);
                break;
            }
        CHECK(c.k0() == expect);
    }
}

TEST_CASE("is_n_successful band logic") {
    const SuccessCriterion c{1.0, 5};
    REQUIRE(c.k0() == 4);

    auto counts = [&](std::uint64_t n4, std::uint64_t n5) {
        return std::vector<std::uint64_t>{1, 1, 1, n4, n5};
    };
    const auto center4 = static_cast<std::uint64_t>(std::llround(c.frak(4)));
    const auto center5 = static_cast<std::uint64_t>(std::llround(c.frak(5)));
    CHECK(is_n_successful(counts(center4, center5), c));

    // Above the band at level 5.
    const auto big5 = static_cast<std::uint64_t>(std::ceil(c.frak(5) + 5.5));
    CHECK_FALSE(is_n_successful(counts(center4, big5), c));

    // Inclusive lower endpoints.
    const auto lo4 = static_cast<std::uint64_t>(std::ceil(c.frak(4) - 4.0));
    const auto lo5 = static_cast<std::uint64_t>(std::ceil(c.frak(5) - 5.0));
    CHECK(is_n_successful(counts(lo4, lo5), c));

    // A 2 below k0 fails.
    const std::vector<std::uint64_t> bad{1, 2, 1, center4, center5};
    CHECK_FALSE(is_n_successful(bad, c));
    const std::vector<std::uint64_t> short_counts{1, 1};
    CHECK_THROWS_AS(is_n_successful(short_counts, c), std::invalid_argument);
}

TEST_CASE("separation level on the desk schedule") {
    const RadiiSchedule s = RadiiSchedule::desk(4.0, 2.0, 3); // radii 32,16,8,4
    CHECK_FALSE(separation_level({5, 5}, {5, 5}, s).has_value());

    // Far apart: disjoint already at the coarsest level.
    CHECK(separation_level({0, 0}, {100, 0}, s) == 0);

    // |x-y| = 20: disjoint first at level 2 (2 r_2 = 16 <= 20 < 2 r_1 = 32).
    CHECK(separation_level({0, 0}, {20, 0}, s) == 2);

    // Touching points: only the innermost level may separate; 2 r_3 = 8 > 1,
    // so no level works.
    CHECK_FALSE(separation_level({0, 0}, {1, 0}, s).has_value());
}

TEST_CASE("exact lattice-disk disjointness near the boundary") {
    // Real disks overlap (d = 1 < 2r = 1.6) yet share no lattice point.
    CHECK(disks_disjoint({0, 0}, {1, 0}, 0.8));
    // Shared point (1,0) at radius 1.5, centers distance 2.
    CHECK_FALSE(disks_disjoint({0, 0}, {2, 0}, 1.5));
    // Diagonal centers, comfortably apart.
    CHECK(disks_disjoint({0, 0}, {8, 8}, 4.0));
    // d = 7 < 2r = 8, but the overlap strip x in (3,4) holds no lattice column.
    CHECK(disks_disjoint({0, 0}, {7, 0}, 4.0));
    CHECK_FALSE(disks_disjoint({0, 0}, {6, 0}, 4.0));
}

TEST_CASE("tracker rejects schedules whose ring bands could overlap") {
    const RadiiSchedule s = RadiiSchedule::desk(0.5, 2.0, 2);
    CHECK_THROWS_AS(ExcursionTracker({0, 0}, s), std::invalid_argument);
    CHECK_THROWS_AS(ExcursionTracker({0, 0}, RadiiSchedule::paper(3)), std::invalid_argument);
}
