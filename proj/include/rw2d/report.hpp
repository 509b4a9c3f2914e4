#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rw2d {

/// One verified quantity. `anchor` names the claim being checked,
/// `provenance` records where the band comes from: "analytic" for exact
/// or closed-form bands, "fixture" for pilot-calibrated ones, "plumbing"
/// for bookkeeping assertions.
struct CheckRecord {
    std::string id;
    std::string anchor;
    std::string provenance;
    double observed = 0.0;
    std::string band;
    bool pass = false;
    bool censored = false;
};

struct ExperimentReport {
    std::string name;
    std::uint64_t master_seed = 0;
    nlohmann::ordered_json parameters;
    std::vector<CheckRecord> checks;
    std::optional<double> runtime_seconds; // serialized only on request

    bool all_passed() const;
    CheckRecord& add(std::string id, std::string anchor, std::string provenance,
                     double observed, std::string band, bool pass);

    /// Deterministic serialization: runtime is omitted unless asked for,
    /// so identical (seed, cfg) runs produce identical bytes.
    nlohmann::ordered_json to_json(bool with_runtime = false) const;
    static ExperimentReport from_json(const nlohmann::json& j);

    /// RFC-4180-style rows, one per check, with a header.
    std::string to_csv() const;
};

std::string csv_escape(const std::string& field);

/// Combined output of several suites (what `verify` writes).
struct ReportBundle {
    std::uint64_t master_seed = 0;
    std::vector<ExperimentReport> reports;

    bool all_passed() const;
    nlohmann::ordered_json to_json(bool with_runtime = false) const;
    std::string to_csv() const;
};

} // namespace rw2d
