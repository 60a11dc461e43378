#pragma once

#include "sourcewave/propagation.hpp"
#include "sourcewave/report.hpp"
#include "sourcewave/states.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sourcewave {

inline constexpr int scenario_schema_version = 1;

/// Malformed or inconsistent scenario document.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { free_density, free_equivalence, propagators, step_relation, arrival };

std::string to_string(ExperimentKind kind);

struct CheckSpec {
    Bound bound = Bound::at_most;
    double value = 0.0;
};

struct Scenario {
    std::string name;
    std::string description;
    ExperimentKind experiment = ExperimentKind::free_density;
    StateSpec state = WellStateSpec{};
    PotentialProfile potential = FreePotential{};
    Grid1D grid{-60.0, 60.0, 8192};
    double dt = 1e-3;
    double record_length = 200.0;
    std::vector<double> probes{0.0};
    std::vector<std::string> outputs;
    double edge_threshold = 1e-8;
    nlohmann::json parameters = nlohmann::json::object();
    std::map<std::string, CheckSpec> checks;

    TimeGrid time_grid() const;
    EdgeMonitor edge_monitor() const;
    bool wants(const std::string& output) const;

    template <typename T>
    T param(const std::string& key, T fallback) const
    {
        return parameters.contains(key) ? parameters.at(key).get<T>() : fallback;
    }
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& scenario);

/// Figure presets first, then the cross-check presets.
std::vector<std::string> preset_names();
std::vector<std::string> figure_preset_names();
bool is_preset(const std::string& name);
Scenario preset(const std::string& name);
std::string list_presets();

struct Overrides {
    std::optional<double> record_length;
    std::optional<double> dt;
    std::optional<Grid1D> grid;
    double tolerance_scale = 1.0;
};

/// Parses "xmin,xmax,n".
Grid1D parse_grid_option(const std::string& text);
void apply_overrides(Scenario& scenario, const Overrides& overrides);

} // namespace sourcewave
