#include "rw2d/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rw2d {

void LocalTimeLedger::recompute_max() {
    max_count_ = 0;
    max_point_ = LatticePoint{};
    for (const auto& [p, c] : counts_) bump_max(p, c);
}

std::uint64_t LocalTimeLedger::count_at_least(double threshold) const {
    std::uint64_t n = 0;
    for (const auto& [p, c] : counts_)
        if (static_cast<double>(c) >= threshold) ++n;
    return n;
}

std::uint64_t LocalTimeLedger::psi_count(double R, double a) const {
    if (!(R > 1.0)) throw std::invalid_argument("psi_count: R must be > 1");
    if (!(a > 0.0)) throw std::invalid_argument("psi_count: a must be > 0");
    const double lr = std::log(R);
    const double threshold = (2.0 * a / M_PI) * lr * lr;
    const DiskSpec disk({0, 0}, R);
    std::uint64_t n = 0;
    for (const auto& [p, c] : counts_)
        if (static_cast<double>(c) >= threshold && disk.contains(p)) ++n;
    return n;
}

std::uint64_t LocalTimeLedger::theta_count(std::uint64_t n_steps, double alpha) const {
    if (n_steps <= 1) throw std::invalid_argument("theta_count: n must be > 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("theta_count: alpha must be > 0");
    const double ln = std::log(static_cast<double>(n_steps));
    return count_at_least((alpha / M_PI) * ln * ln);
}

nlohmann::ordered_json LocalTimeLedger::summary_json(double R, std::span<const double> a_grid,
                                                     std::uint64_t n_steps,
                                                     std::span<const double> alpha_grid) const {
    nlohmann::ordered_json j;
    j["total"] = total_;
    j["distinct"] = counts_.size();
    if (!counts_.empty()) {
        const auto [p, c] = max_local_time();
        j["max"] = {{"x", p.x}, {"y", p.y}, {"count", c}};
    }
    if (!a_grid.empty()) {
        auto psi = nlohmann::ordered_json::array();
        for (const double a : a_grid)
            psi.push_back({{"a", a}, {"count", psi_count(R, a)}});
        j["psi"] = {{"R", R}, {"counts", std::move(psi)}};
    }
    if (!alpha_grid.empty()) {
        auto theta = nlohmann::ordered_json::array();
        for (const double alpha : alpha_grid)
            theta.push_back({{"alpha", alpha}, {"count", theta_count(n_steps, alpha)}});
        j["theta"] = {{"n", n_steps}, {"counts", std::move(theta)}};
    }
    return j;
}

std::string LocalTimeLedger::to_csv() const {
    std::vector<std::pair<LatticePoint, std::uint64_t>> rows(counts_.begin(), counts_.end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    os << "x,y,count\n";
    for (const auto& [p, c] : rows) os << p.x << ',' << p.y << ',' << c << '\n';
    return os.str();
}

} // namespace rw2d
