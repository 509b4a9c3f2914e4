#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rw2d/point.hpp"

namespace rw2d {

/// Sparse visit-count ledger L^x with running total and argmax.
/// One ledger per trial; cross-trial aggregation goes through merge().
class LocalTimeLedger {
public:
    using CountMap = std::unordered_map<LatticePoint, std::uint64_t, PointHash>;

    void record_visit(const LatticePoint& p) {
        const std::uint64_t c = ++counts_[p];
        ++total_;
        bump_max(p, c);
    }

    /// Pointwise sum; associative and commutative (the argmax is
    /// recomputed from the merged counts, so merge order cannot matter).
    void merge(const LocalTimeLedger& other) {
        for (const auto& [p, c] : other.counts_) counts_[p] += c;
        total_ += other.total_;
        recompute_max();
    }

    /// (most visited point, its count); lexicographic tie-break.
    std::pair<LatticePoint, std::uint64_t> max_local_time() const {
        if (counts_.empty()) throw std::invalid_argument("max_local_time: empty ledger");
        return {max_point_, max_count_};
    }

    /// |Psi| count: points of D(0,R) with count >= (2a/pi) * (log R)^2.
    /// The ledger is expected to hold exactly one run stopped on exit of D(0,R).
    std::uint64_t psi_count(double R, double a) const;

    /// |Theta| count: points with count >= (alpha/pi) * (log n)^2 after n steps.
    std::uint64_t theta_count(std::uint64_t n_steps, double alpha) const;

    /// Points with count >= threshold (threshold kept real-valued).
    std::uint64_t count_at_least(double threshold) const;

    std::uint64_t total() const { return total_; }
    std::size_t distinct_points() const { return counts_.size(); }
    std::uint64_t count_at(const LatticePoint& p) const {
        auto it = counts_.find(p);
        return it == counts_.end() ? 0 : it->second;
    }
    const CountMap& counts() const { return counts_; }
    bool empty() const { return counts_.empty(); }

    /// CSV rows "x,y,count" sorted by point; includes a header.
    std::string to_csv() const;

    /// Summary with thresholded counts over the requested grids; pass an
    /// empty grid to skip either family.
    nlohmann::ordered_json summary_json(double R, std::span<const double> a_grid,
                                        std::uint64_t n_steps,
                                        std::span<const double> alpha_grid) const;

private:
    void bump_max(const LatticePoint& p, std::uint64_t c) {
        if (c > max_count_ || (c == max_count_ && p < max_point_)) {
            max_count_ = c;
            max_point_ = p;
        }
    }
    void recompute_max();

    CountMap counts_;
    std::uint64_t total_ = 0;
    LatticePoint max_point_;
    std::uint64_t max_count_ = 0;
};

} // namespace rw2d
