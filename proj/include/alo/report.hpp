#ifndef ALO_REPORT_HPP
#define ALO_REPORT_HPP

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace alo {

using json = nlohmann::json;

/*
 * Outcome of one identity check. `relation` is the human-readable formula
 * being verified; it is serialized under the "paper_eq" key.
 */
struct VerificationReport {
    std::string identity;
    std::string relation;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    json details = json::object();

    bool operator==(const VerificationReport&) const = default;
};

inline VerificationReport make_check(std::string identity, std::string relation, double residual,
                                     double tolerance, json details = json::object())
{
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    return {std::move(identity), std::move(relation), residual, tolerance, pass, std::move(details)};
}

namespace detail {

// JSON has no inf/nan; they travel as strings.
inline json real_to_json(double v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline double real_from_json(const json& j)
{
    if (j.is_string()) return std::stod(j.get<std::string>());
    return j.get<double>();
}

} // namespace detail

inline void to_json(json& j, const VerificationReport& r)
{
    j = json{{"identity", r.identity}, {"paper_eq", r.relation}, {"residual", detail::real_to_json(r.residual)},
             {"tolerance", r.tolerance}, {"pass", r.pass},           {"details", r.details}};
}

inline void from_json(const json& j, VerificationReport& r)
{
    j.at("identity").get_to(r.identity);
    j.at("paper_eq").get_to(r.relation);
    r.residual = detail::real_from_json(j.at("residual"));
    j.at("tolerance").get_to(r.tolerance);
    j.at("pass").get_to(r.pass);
    r.details = j.value("details", json::object());
}

struct ReportBundle {
    std::string scenario;
    std::string description;
    std::vector<VerificationReport> reports;
    json extras = json::object();

    bool all_pass() const
    {
        for (const auto& r : reports)
            if (!r.pass) return false;
        return true;
    }

    std::vector<const VerificationReport*> failures() const
    {
        std::vector<const VerificationReport*> out;
        for (const auto& r : reports)
            if (!r.pass) out.push_back(&r);
        return out;
    }

    const VerificationReport* find(const std::string& identity) const
    {
        for (const auto& r : reports)
            if (r.identity == identity) return &r;
        return nullptr;
    }

    void add(VerificationReport r) { reports.push_back(std::move(r)); }

    bool operator==(const ReportBundle&) const = default;
};

inline void to_json(json& j, const ReportBundle& b)
{
    j = json{{"scenario", b.scenario},
             {"description", b.description},
             {"pass", b.all_pass()},
             {"reports", b.reports}};
    if (!b.extras.empty()) j["extras"] = b.extras;
}

inline void from_json(const json& j, ReportBundle& b)
{
    j.at("scenario").get_to(b.scenario);
    b.description = j.value("description", std::string{});
    j.at("reports").get_to(b.reports);
    b.extras = j.value("extras", json::object());
}

/// Six significant digits.
inline std::string format_sig(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

inline void write_table(std::ostream& os, const ReportBundle& b)
{
    os << "scenario: " << b.scenario;
    if (!b.description.empty()) os << "  (" << b.description << ")";
    os << '\n';
    std::size_t w_id = 8, w_eq = 8;
    for (const auto& r : b.reports) {
        w_id = std::max(w_id, r.identity.size());
        w_eq = std::max(w_eq, r.relation.size());
    }
    os << std::left << std::setw(static_cast<int>(w_id) + 2) << "identity"
       << std::setw(static_cast<int>(w_eq) + 2) << "relation" << std::setw(14) << "residual"
       << std::setw(14) << "tolerance" << "status\n";
    for (const auto& r : b.reports) {
        os << std::left << std::setw(static_cast<int>(w_id) + 2) << r.identity
           << std::setw(static_cast<int>(w_eq) + 2) << r.relation << std::setw(14)
           << format_sig(r.residual) << std::setw(14) << format_sig(r.tolerance)
           << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    os << (b.all_pass() ? "all checks passed" : "FAILED checks present") << '\n';
}

} // namespace alo

#endif
