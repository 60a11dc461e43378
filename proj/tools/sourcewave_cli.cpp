#include "sourcewave/errors.hpp"
#include "sourcewave/experiments.hpp"
#include "sourcewave/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace sourcewave;

namespace {

constexpr int exit_failed_checks = 1;
constexpr int exit_schema = 2;
constexpr int exit_numerical = 3;

std::size_t thread_cap()
{
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SOURCE_WAVE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                cap = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring SOURCE_WAVE_THREADS=" << env << '\n';
        }
    }
    return cap;
}

std::vector<Scenario> resolve(const std::string& target)
{
    std::vector<Scenario> scenarios;
    if (target == "all") {
        for (const std::string& name : preset_names())
            scenarios.push_back(preset(name));
    } else if (fs::exists(target)) {
        scenarios.push_back(load_scenario(target));
    } else if (is_preset(target)) {
        scenarios.push_back(preset(target));
    } else {
        throw ScenarioError("'" + target + "' is neither a scenario file, a preset nor 'all'");
    }
    return scenarios;
}

struct Outcome {
    std::optional<ScenarioResult> result;
    std::string error;
    int code = 0;
};

Outcome run_one(const Scenario& scenario, const fs::path& dir)
{
    Outcome out;
    try {
        out.result = run_scenario(scenario, dir);
    } catch (const ScenarioError& err) {
        out.error = err.what();
        out.code = exit_schema;
    } catch (const Error& err) {
        out.error = err.what();
        out.code = exit_numerical;
    }
    return out;
}

int run(const std::string& target, const fs::path& output_dir, bool check, const Overrides& overrides)
{
    std::vector<Scenario> scenarios;
    try {
        scenarios = resolve(target);
        for (Scenario& s : scenarios)
            apply_overrides(s, overrides);
    } catch (const ScenarioError& err) {
        std::cerr << "schema error: " << err.what() << '\n';
        return exit_schema;
    }

    const bool nested = scenarios.size() > 1;
    std::vector<Outcome> outcomes(scenarios.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            {
                std::lock_guard lock(log_mutex);
                std::cerr << "running " << scenarios[i].name << '\n';
            }
            outcomes[i] = run_one(scenarios[i], nested ? output_dir / scenarios[i].name : output_dir);
        }
    };
    const std::size_t n_threads = std::min(thread_cap(), scenarios.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    ComparisonReport report;
    int code = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (o.result) {
            report.append(o.result->report);
            continue;
        }
        std::cerr << (o.code == exit_schema ? "schema error: " : "numerical error: ") << scenarios[i].name << ": "
                  << o.error << '\n';
        if (code == 0)
            code = o.code;
    }

    fs::create_directories(output_dir);
    std::ofstream(output_dir / "report.json", std::ios::binary) << report.to_json().dump(2) << '\n';
    std::string summary = report.summary();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (!outcomes[i].result)
            summary += "ERROR " + scenarios[i].name + ": " + outcomes[i].error + '\n';
    }
    std::ofstream(output_dir / "summary.txt", std::ios::binary) << summary;
    std::cout << summary;

    if (code != 0)
        return code;
    return check && !report.all_pass() ? exit_failed_checks : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Source boundary conditions for the 1D Schrodinger equation: figure data and checks"};
    app.require_subcommand(1);

    std::string target;
    std::string output_dir = "output";
    bool check = false;
    std::optional<double> record_length, dt;
    std::string grid_text;
    double tolerance_scale = 1.0;

    CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario file, a preset or 'all'");
    run_cmd->add_option("target", target, "Scenario file path, preset name or 'all'")->required();
    run_cmd->add_option("--output-dir", output_dir, "Directory for CSV files, report.json and summary.txt");
    run_cmd->add_flag("--check", check, "Exit with status 1 when a check fails");
    run_cmd->add_option("--record-length", record_length, "Override the signal record length T");
    run_cmd->add_option("--dt", dt, "Override the time step");
    run_cmd->add_option("--grid", grid_text, "Override the grid as \"xmin,xmax,n\"");
    run_cmd->add_option("--tolerance-scale", tolerance_scale, "Multiply every upper-bound tolerance");

    CLI::App* list_cmd = app.add_subcommand("list-presets", "Print the figure presets and their parameters");

    CLI11_PARSE(app, argc, argv);

    if (*list_cmd) {
        std::cout << list_presets();
        return 0;
    }

    Overrides overrides;
    overrides.record_length = record_length;
    overrides.dt = dt;
    overrides.tolerance_scale = tolerance_scale;
    try {
        if (!grid_text.empty())
            overrides.grid = parse_grid_option(grid_text);
    } catch (const ScenarioError& err) {
        std::cerr << "schema error: " << err.what() << '\n';
        return exit_schema;
    }
    return run(target, output_dir, check, overrides);
}
