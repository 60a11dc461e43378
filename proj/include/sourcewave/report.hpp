#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sourcewave {

/// How a metric is judged: value <= bound or value > bound.
enum class Bound { at_most, greater_than };

struct ComparisonRow {
    std::string scenario;
    std::string metric;
    double value = 0.0;
    std::optional<double> tolerance; // absent for informational rows
    Bound bound = Bound::at_most;
    bool pass = true;
    double runtime_s = 0.0;
    std::string note;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;

    /// Adds a judged row; the pass flag follows from value, tolerance and bound.
    ComparisonRow& check(std::string scenario, std::string metric, double value, double tolerance,
                         Bound bound = Bound::at_most, std::string note = {});
    ComparisonRow& info(std::string scenario, std::string metric, double value, std::string note = {});
    void set_runtime(const std::string& scenario, double seconds);
    void append(const ComparisonReport& other);

    bool all_pass() const;
    nlohmann::json to_json() const;
    std::string summary() const;
};

} // namespace sourcewave
