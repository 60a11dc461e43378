#pragma once

#include "sourcewave/report.hpp"
#include "sourcewave/scenario.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sourcewave {

struct ScenarioResult {
    ComparisonReport report;
    std::vector<std::filesystem::path> files;
    double runtime_s = 0.0;
};

/// Runs one scenario, writes its CSV files into out_dir and returns the
/// judged rows. Scenarios share no state, so several may run concurrently.
///
/// Throws ScenarioError for missing or mistyped parameters and Error for
/// numerical failures.
ScenarioResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

} // namespace sourcewave
