#include "rw2d/report.hpp"

#include <sstream>

namespace rw2d {

bool ExperimentReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.pass && !c.censored) return false;
    return true;
}

CheckRecord& ExperimentReport::add(std::string id, std::string anchor, std::string provenance,
                                   double observed, std::string band, bool pass) {
    checks.push_back({std::move(id), std::move(anchor), std::move(provenance), observed,
                      std::move(band), pass, false});
    return checks.back();
}

nlohmann::ordered_json ExperimentReport::to_json(bool with_runtime) const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["seed"] = master_seed;
    j["parameters"] = parameters;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["anchor"] = c.anchor;
        cj["provenance"] = c.provenance;
        cj["observed"] = c.observed;
        cj["band"] = c.band;
        cj["pass"] = c.pass;
        if (c.censored) cj["censored"] = true;
        arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    j["all_passed"] = all_passed();
    if (with_runtime && runtime_seconds) j["runtime_seconds"] = *runtime_seconds;
    return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.master_seed = j.at("seed").get<std::uint64_t>();
    r.parameters = j.at("parameters");
    for (const auto& cj : j.at("checks")) {
        CheckRecord c;
        c.id = cj.at("id").get<std::string>();
        c.anchor = cj.at("anchor").get<std::string>();
        c.provenance = cj.at("provenance").get<std::string>();
        c.observed = cj.at("observed").get<double>();
        c.band = cj.at("band").get<std::string>();
        c.pass = cj.at("pass").get<bool>();
        c.censored = cj.value("censored", false);
        r.checks.push_back(std::move(c));
    }
    if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

static void csv_rows(std::ostringstream& os, const ExperimentReport& r) {
    for (const auto& c : r.checks) {
        nlohmann::json obs = c.observed; // shortest round-trip formatting
        os << csv_escape(r.name) << ',' << csv_escape(c.id) << ',' << csv_escape(c.anchor) << ','
           << csv_escape(c.provenance) << ',' << obs.dump() << ',' << csv_escape(c.band) << ','
           << (c.pass ? "true" : "false") << ',' << (c.censored ? "true" : "false") << '\n';
    }
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    os << "experiment,check,anchor,provenance,observed,band,pass,censored\n";
    csv_rows(os, *this);
    return os.str();
}

bool ReportBundle::all_passed() const {
    for (const auto& r : reports)
        if (!r.all_passed()) return false;
    return true;
}

nlohmann::ordered_json ReportBundle::to_json(bool with_runtime) const {
    nlohmann::ordered_json j;
    j["seed"] = master_seed;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json(with_runtime));
    j["reports"] = std::move(arr);
    j["all_passed"] = all_passed();
    return j;
}

std::string ReportBundle::to_csv() const {
    std::ostringstream os;
    os << "experiment,check,anchor,provenance,observed,band,pass,censored\n";
    for (const auto& r : reports) csv_rows(os, r);
    return os.str();
}

} // namespace rw2d
