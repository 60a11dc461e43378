#include "sourcewave/report.hpp"

#include "sourcewave/csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sourcewave {

ComparisonRow& ComparisonReport::check(std::string scenario, std::string metric, double value, double tolerance,
                                       Bound bound, std::string note)
{
    ComparisonRow row;
    row.scenario = std::move(scenario);
    row.metric = std::move(metric);
    row.value = value;
    row.tolerance = tolerance;
    row.bound = bound;
    row.pass = std::isfinite(value) && (bound == Bound::at_most ? value <= tolerance : value > tolerance);
    row.note = std::move(note);
    rows.push_back(std::move(row));
    return rows.back();
}

ComparisonRow& ComparisonReport::info(std::string scenario, std::string metric, double value, std::string note)
{
    ComparisonRow row;
    row.scenario = std::move(scenario);
    row.metric = std::move(metric);
    row.value = value;
    row.note = std::move(note);
    rows.push_back(std::move(row));
    return rows.back();
}

void ComparisonReport::set_runtime(const std::string& scenario, double seconds)
{
    for (ComparisonRow& row : rows) {
        if (row.scenario == scenario)
            row.runtime_s = seconds;
    }
}

void ComparisonReport::append(const ComparisonReport& other)
{
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

bool ComparisonReport::all_pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
}

nlohmann::json ComparisonReport::to_json() const
{
    nlohmann::json out = nlohmann::json::array();
    for (const ComparisonRow& row : rows) {
        nlohmann::json j{{"scenario", row.scenario},
                         {"metric", row.metric},
                         {"value", row.value},
                         {"pass", row.pass},
                         {"runtime_s", row.runtime_s}};
        if (row.tolerance) {
            j["tolerance"] = *row.tolerance;
            j["bound"] = row.bound == Bound::at_most ? "<=" : ">";
        } else {
            j["tolerance"] = nullptr;
        }
        if (!row.note.empty())
            j["note"] = row.note;
        out.push_back(std::move(j));
    }
    return nlohmann::json{{"all_pass", all_pass()}, {"rows", std::move(out)}};
}

std::string ComparisonReport::summary() const
{
    std::ostringstream out;
    for (const ComparisonRow& row : rows) {
        out << (row.tolerance ? (row.pass ? "PASS " : "FAIL ") : "INFO ") << row.scenario << ' ' << row.metric << " = "
            << format_number(row.value);
        if (row.tolerance)
            out << (row.bound == Bound::at_most ? " <= " : " > ") << format_number(*row.tolerance);
        if (row.runtime_s > 0.0)
            out << " [" << format_number(std::round(row.runtime_s * 100.0) / 100.0) << " s]";
        if (!row.note.empty())
            out << "  (" << row.note << ')';
        out << '\n';
    }
    out << (all_pass() ? "all checks passed" : "some checks failed") << '\n';
    return out.str();
}

} // namespace sourcewave
