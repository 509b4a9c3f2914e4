#include <doctest.h>

#include <cmath>
#include <limits>

#include "rw2d/localtime.hpp"
#include "rw2d/walk.hpp"

using namespace rw2d;

TEST_CASE("record_visit bookkeeping") {
    LocalTimeLedger l;
    l.record_visit({0, 0});
    l.record_visit({0, 0});
    CHECK(l.total() == 2);
    CHECK(l.count_at({0, 0}) == 2);
    const auto [p, c] = l.max_local_time();
    CHECK(p == LatticePoint{0, 0});
    CHECK(c == 2);
}

TEST_CASE("argmax tie-break is lexicographic") {
    LocalTimeLedger l;
    for (int i = 0; i < 3; ++i) l.record_visit({1, 0});
    for (int i = 0; i < 3; ++i) l.record_visit({0, 1});
    const auto [p, c] = l.max_local_time();
    CHECK(c == 3);
    CHECK(p == LatticePoint{0, 1}); // (0,1) < (1,0)
}

TEST_CASE("empty ledger argmax is a usage error") {
    LocalTimeLedger l;
    CHECK_THROWS_AS(l.max_local_time(), std::invalid_argument);
}

TEST_CASE("merge is a pointwise sum, independent of merge order") {
    LocalTimeLedger a, b, c;
    a.record_visit({0, 0});
    a.record_visit({2, 1});
    b.record_visit({0, 0});
    b.record_visit({-1, 5});
    c.record_visit({2, 1});
    c.record_visit({2, 1});

    LocalTimeLedger ab = a;
    ab.merge(b);
    ab.merge(c);
    LocalTimeLedger cb = c;
    cb.merge(b);
    cb.merge(a);

    CHECK(ab.total() == cb.total());
    CHECK(ab.total() == 6);
    CHECK(ab.count_at({0, 0}) == 2);
    CHECK(ab.count_at({2, 1}) == 3);
    for (const auto& [p, cnt] : ab.counts()) CHECK(cb.count_at(p) == cnt);
    CHECK(ab.max_local_time() == cb.max_local_time());
    CHECK(ab.max_local_time().first == LatticePoint{2, 1});
}

TEST_CASE("walk feeding: total = exit_time + 1; pigeonhole bound") {
    WalkState s({0, 0}, Rng(3, 0));
    LocalTimeLedger l;
    const ExitResult r = walk_until_exit(s, DiskSpec({0, 0}, 25.0),
                                         [&l](LatticePoint p) { l.record_visit(p); });
    CHECK(l.total() == r.exit_time + 1);
    const auto [p, c] = l.max_local_time();
    const auto distinct = static_cast<std::uint64_t>(l.distinct_points());
    CHECK(c >= (l.total() + distinct - 1) / distinct);
}

TEST_CASE("psi_count thresholds") {
    LocalTimeLedger l;
    for (int i = 0; i < 3; ++i) l.record_visit({0, 0});
    for (int i = 0; i < 2; ++i) l.record_visit({1, 0});
    l.record_visit({2, 0});

    const double R = std::exp(2.0); // threshold (2a/pi) * 4
    // a = 1: threshold ~ 2.546, only the count-3 point qualifies.
    CHECK(l.psi_count(R, 1.0) == 1);
    // Huge a: threshold above the running max.
    CHECK(l.psi_count(R, 50.0) == 0);
    // Tiny a: threshold below 1, every visited point inside D(0,R) counts.
    CHECK(l.psi_count(R, 1e-9) == 3);
    CHECK_THROWS_AS(l.psi_count(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("psi_count restricts to the disk") {
    LocalTimeLedger l;
    for (int i = 0; i < 9; ++i) l.record_visit({100, 0}); // outside D(0, e^2)
    for (int i = 0; i < 9; ++i) l.record_visit({1, 1});
    CHECK(l.psi_count(std::exp(2.0), 1.0) == 1);
}

TEST_CASE("theta_count mirrors psi with the alpha/pi threshold") {
    LocalTimeLedger l;
    for (int i = 0; i < 3; ++i) l.record_visit({0, 0});
    for (int i = 0; i < 2; ++i) l.record_visit({7, 0});
    l.record_visit({-3, 2});

    const std::uint64_t n = 7;
    const double ln = std::log(static_cast<double>(n));
    const double alpha_mid = 2.5 * M_PI / (ln * ln); // threshold 2.5
    CHECK(l.theta_count(n, alpha_mid) == 1);
    CHECK(l.theta_count(n, 100.0) == 0);
    CHECK(l.theta_count(n, 1e-9) == 3);
    CHECK_THROWS_AS(l.theta_count(1, 0.5), std::invalid_argument);

    // Monotone nonincreasing in alpha.
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (double alpha = 0.1; alpha < 3.0; alpha += 0.1) {
        const std::uint64_t c = l.theta_count(n, alpha);
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("csv dump is sorted with a header") {
    LocalTimeLedger l;
    l.record_visit({1, 0});
    l.record_visit({-1, 2});
    const std::string csv = l.to_csv();
    CHECK(csv == "x,y,count\n-1,2,1\n1,0,1\n");
}

TEST_CASE("json summary carries totals, argmax and thresholded grids") {
    LocalTimeLedger l;
    for (int i = 0; i < 3; ++i) l.record_visit({0, 0});
    l.record_visit({1, 0});
    const std::vector<double> a_grid{1.0, 50.0};
    const std::vector<double> alpha_grid{1e-9};
    const auto j = l.summary_json(std::exp(2.0), a_grid, 7, alpha_grid);
    CHECK(j["total"] == 4);
    CHECK(j["distinct"] == 2);
    CHECK(j["max"]["count"] == 3);
    CHECK(j["psi"]["counts"][0]["count"] == 1);
    CHECK(j["psi"]["counts"][1]["count"] == 0);
    CHECK(j["theta"]["counts"][0]["count"] == 2);
}
