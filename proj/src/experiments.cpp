#include "sourcewave/experiments.hpp"

#include "sourcewave/csv.hpp"
#include "sourcewave/scattering.hpp"
#include "sourcewave/source.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace sourcewave {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Judged row when the scenario lists the metric, informational otherwise.
void record(ComparisonReport& report, const Scenario& s, const std::string& metric, double value,
            std::string note = {})
{
    const auto it = s.checks.find(metric);
    if (it == s.checks.end())
        report.info(s.name, metric, value, std::move(note));
    else
        report.check(s.name, metric, value, it->second.value, it->second.bound, std::move(note));
}

template <typename T>
T parameter(const Scenario& s, const std::string& key)
{
    if (!s.parameters.contains(key))
        throw ScenarioError(s.name + ": missing parameter '" + key + "'");
    try {
        return s.parameters.at(key).get<T>();
    } catch (const json::exception& err) {
        throw ScenarioError(s.name + ": parameter '" + key + "': " + err.what());
    }
}

template <typename T>
T parameter_or(const Scenario& s, const std::string& key, T fallback)
{
    return s.parameters.contains(key) ? parameter<T>(s, key) : fallback;
}

std::pair<double, double> range_parameter(const Scenario& s, const std::string& key)
{
    const auto r = parameter<std::vector<double>>(s, key);
    if (r.size() != 2 || !(r[0] < r[1]))
        throw ScenarioError(s.name + ": parameter '" + key + "' must be [low, high] with low < high");
    return {r[0], r[1]};
}

Grid1D grid_parameter(const Scenario& s, const std::string& key)
{
    const json g = parameter<json>(s, key);
    try {
        return Grid1D::make(g.at("x_min").get<double>(), g.at("x_max").get<double>(), g.at("n").get<std::size_t>());
    } catch (const json::exception& err) {
        throw ScenarioError(s.name + ": parameter '" + key + "': " + err.what());
    }
}

const WellStateSpec& well_state(const Scenario& s)
{
    const auto* w = std::get_if<WellStateSpec>(&s.state);
    if (!w)
        throw ScenarioError(s.name + ": experiment " + to_string(s.experiment) + " needs a well state");
    return *w;
}

std::filesystem::path output_path(const std::filesystem::path& dir, const Scenario& s, const std::string& what)
{
    return dir / (s.name + "_" + what + ".csv");
}

double relative_l2(const std::vector<Complex>& approx, const std::vector<Complex>& exact)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        num += std::norm(approx[i] - exact[i]);
        den += std::norm(exact[i]);
    }
    return std::sqrt(num / den);
}

double max_abs(const std::vector<Complex>& v)
{
    double m = 0.0;
    for (const Complex& z : v)
        m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------- free density

ScenarioResult run_free_density(const Scenario& s, const std::filesystem::path& dir)
{
    ScenarioResult result;
    const WellStateSpec& spec = well_state(s);
    if (!is_free(s.potential))
        throw ScenarioError(s.name + ": free_density needs the free potential");
    const double t = parameter_or<double>(s, "time", 0.0);
    const auto [lo, hi] = range_parameter(s, "plot_range");
    const PhysicalConstants consts;

    const WaveField initial = make_initial_state(s.state, s.grid, consts);
    WaveField psi = t == 0.0 ? initial : evolve_free_spectral(initial, t, consts, s.edge_monitor());
    const WaveField plus = momentum_split(initial, MomentumSign::positive, t, consts);
    const WaveField minus = momentum_split(initial, MomentumSign::negative, t, consts);

    const double peak = max_abs(psi.values);
    double partition = 0.0, conjugacy = 0.0, cross = 0.0, total = 0.0, tails = 0.0;
    for (std::size_t j = 0; j < s.grid.n; ++j) {
        const Complex a = plus.values[j], b = minus.values[j];
        partition = std::max(partition, std::abs(a + b - psi.values[j]) / peak);
        conjugacy = std::max(conjugacy, std::abs(b - std::conj(a)) / peak);
        cross += std::abs(2.0 * std::real(a * std::conj(b)));
        total += std::norm(psi.values[j]);
        const double x = s.grid.x(j);
        if (x < spec.a || x > spec.b)
            tails += std::norm(a);
    }
    record(result.report, s, "split_partition", partition);
    if (spec.p_avg == 0.0 && t == 0.0)
        record(result.report, s, "split_conjugacy", conjugacy, "psi_- against conj(psi_+), real initial state");
    record(result.report, s, "interference_weight", cross / total,
           "int |2 Re psi_+ conj(psi_-)| dx over int |psi|^2 dx");
    record(result.report, s, "plus_weight_outside_well", tails * s.grid.dx());

    if (t != 0.0) {
        const WaveField exact = evolve_free_moshinsky(spec, s.grid, t, consts);
        record(result.report, s, "moshinsky_relative_l2", relative_l2(psi.values, exact.values),
               "spectral grid evolution against the closed form");
    }

    if (s.wants("density")) {
        std::vector<std::vector<double>> cols(4);
        for (std::size_t j = 0; j < s.grid.n; ++j) {
            const double x = s.grid.x(j);
            if (x < lo || x > hi)
                continue;
            cols[0].push_back(x);
            cols[1].push_back(std::norm(psi.values[j]));
            cols[2].push_back(std::norm(plus.values[j]));
            cols[3].push_back(std::norm(minus.values[j]));
        }
        const auto path = output_path(dir, s, "density");
        write_csv_file(path.string(), {"x", "density", "density_plus", "density_minus"}, cols);
        result.files.push_back(path);
    }
    return result;
}

// ---------------------------------------------------------------- free equivalence

Signal free_probe_signal(const Scenario& s, const PhysicalConstants& consts)
{
    const std::string source = parameter_or<std::string>(s, "signal_source", "moshinsky");
    if (source == "moshinsky")
        return extract_signal(moshinsky_probe_record(well_state(s), s.time_grid(), 0.0, consts));
    if (source == "split") {
        EvolutionOptions options;
        options.edges = s.edge_monitor();
        return extract_signal(
            evolve_split_operator(make_initial_state(s.state, s.grid, consts), s.potential, s.time_grid(), consts,
                                  options));
    }
    throw ScenarioError(s.name + ": signal_source must be \"moshinsky\" or \"split\"");
}

ScenarioResult run_free_equivalence(const Scenario& s, const std::filesystem::path& dir)
{
    ScenarioResult result;
    const WellStateSpec& spec = well_state(s);
    if (!is_free(s.potential))
        throw ScenarioError(s.name + ": free_equivalence needs the free potential");
    const PhysicalConstants consts;
    const auto xs = parameter<std::vector<double>>(s, "x_points");
    const auto ts = parameter<std::vector<double>>(s, "t_points");
    const auto vx = parameter<std::vector<double>>(s, "vanishing_x");
    const auto vt = parameter<std::vector<double>>(s, "vanishing_t");
    const double significance = parameter_or<double>(s, "significance", 1e-3);

    const Signal signal = free_probe_signal(s, consts);
    const EnergySpectrum spectrum = energy_spectrum(signal, consts);
    const double signal_peak = signal.max_abs();

    struct Point {
        double x, t;
        Complex exact, energy, time;
    };
    std::vector<Point> points;
    double exact_peak = 0.0;
    for (double x : xs) {
        for (double t : ts) {
            Point p{x, t, evolve_free_moshinsky(spec, x, t, consts), reconstruct_energy_domain(spectrum, x, t, consts),
                    reconstruct_time_domain(signal, x, t, consts)};
            exact_peak = std::max(exact_peak, std::abs(p.exact));
            points.push_back(p);
        }
    }
    double energy_route = 0.0, consistency = 0.0;
    std::size_t significant = 0;
    for (const Point& p : points) {
        if (std::abs(p.exact) <= significance * exact_peak)
            continue;
        ++significant;
        energy_route = std::max(energy_route, std::abs(p.energy - p.exact) / std::abs(p.exact));
        consistency = std::max(consistency, std::abs(p.time - p.energy) / std::abs(p.energy));
    }
    record(result.report, s, "energy_route_max_relative", energy_route,
           std::to_string(significant) + " of " + std::to_string(points.size()) + " points above the cut");
    record(result.report, s, "route_consistency_max_relative", consistency);

    double vanishing = 0.0;
    for (double x : vx) {
        for (double t : vt)
            vanishing = std::max(vanishing, std::abs(reconstruct_energy_domain(spectrum, x, t, consts)) / signal_peak);
    }
    record(result.report, s, "vanishing_max_ratio", vanishing, "relative to max |signal|");
    record(result.report, s, "signal_at_zero", std::abs(signal.values.front()));
    record(result.report, s, "signal_decay_ratio", std::abs(signal.values.back()) / signal_peak,
           "|signal(T)| / max |signal|");

    // spectrum against chi from the initial state, with the power-law tail past T completed
    SpectrumOptions completed;
    completed.tail_terms = parameter_or<std::size_t>(s, "tail_terms", 2);
    const EnergySpectrum full = energy_spectrum(signal, consts, completed);
    const auto [chi_lo, chi_hi] = range_parameter(s, "chi_range");
    const double gap = parameter_or<double>(s, "chi_gap", 0.05);
    const MomentumAmplitude amp = MomentumAmplitude::analytic(s.state, consts);
    double chi_err = 0.0, chi_peak = 0.0;
    for (std::size_t i = 0; i < full.energies.size(); ++i) {
        const double E = full.energies[i];
        if (E < chi_lo || E > chi_hi || std::abs(E) < gap)
            continue;
        const Complex exact = chi_from_initial_state(amp, E, consts);
        chi_err = std::max(chi_err, std::abs(full.value(i) - exact));
        chi_peak = std::max(chi_peak, std::abs(exact));
    }
    record(result.report, s, "chi_max_relative", chi_err / chi_peak,
           "max |chi_fft - chi_exact| / max |chi_exact| with tail completion");

    // Parseval for the padded transform against the trapezoid-weighted record
    double spectral = 0.0, temporal = 0.0;
    for (const Complex& v : spectrum.values)
        spectral += std::norm(v);
    spectral *= spectrum.energy_spacing();
    for (std::size_t k = 0; k < signal.values.size(); ++k) {
        const double w = (k == 0 || k + 1 == signal.values.size()) ? 0.5 : 1.0;
        temporal += std::norm(w * signal.values[k]);
    }
    temporal *= signal.tgrid.dt;
    record(result.report, s, "parseval_relative", std::abs(spectral - temporal) / temporal);

    if (s.wants("signal")) {
        const auto path = output_path(dir, s, "signal");
        std::ofstream file(path, std::ios::binary);
        write_signal_csv(file, signal);
        result.files.push_back(path);
    }
    if (s.wants("spectrum")) {
        const auto path = output_path(dir, s, "spectrum");
        std::ofstream file(path, std::ios::binary);
        write_spectrum_csv(file, spectrum);
        result.files.push_back(path);
    }
    if (s.wants("points")) {
        std::vector<std::vector<double>> cols(8);
        for (const Point& p : points) {
            const double row[8] = {p.x, p.t, p.exact.real(), p.exact.imag(), p.energy.real(), p.energy.imag(),
                                   p.time.real(), p.time.imag()};
            for (int c = 0; c < 8; ++c)
                cols[c].push_back(row[c]);
        }
        const auto path = output_path(dir, s, "points");
        write_csv_file(path.string(), {"x", "t", "re_exact", "im_exact", "re_energy", "im_energy", "re_time", "im_time"},
                       cols);
        result.files.push_back(path);
    }
    return result;
}

// ---------------------------------------------------------------- propagators

double split_error_free(const WellStateSpec& spec, const Grid1D& grid, double dt, double t,
                        const PhysicalConstants& consts)
{
    EvolutionOptions options;
    options.edges.enabled = false;
    options.record_probe = false;
    options.norm_interval = 0;
    options.snapshot_times = {t};
    EvolutionRecord rec = evolve_split_operator(well_ground_state(spec, grid, consts), FreePotential{},
                                                TimeGrid::spanning(0.0, t, dt), consts, options);
    const WaveField& psi = rec.snapshots.back();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const Complex exact = evolve_free_moshinsky(spec, grid.x(j), t, consts);
        num += std::norm(psi.values[j] - exact);
        den += std::norm(exact);
    }
    return std::sqrt(num / den);
}

WaveField split_run(const StateSpec& state, const Grid1D& grid, const PotentialProfile& potential, double dt,
                    double t, const PhysicalConstants& consts)
{
    EvolutionOptions options;
    options.edges.enabled = false;
    options.record_probe = false;
    options.snapshot_times = {t};
    EvolutionRecord rec = evolve_split_operator(make_initial_state(state, grid, consts), potential,
                                                TimeGrid::spanning(0.0, t, dt), consts, options);
    return std::move(rec.snapshots.back());
}

/// Worst |ratio/4 - 1| over successive halvings, and the ratios as text.
std::pair<double, std::string> halving_ratios(const StateSpec& state, const Grid1D& grid,
                                              const PotentialProfile& potential, const std::vector<double>& dts,
                                              double dt_ref, double t, const PhysicalConstants& consts)
{
    const WaveField reference = split_run(state, grid, potential, dt_ref, t, consts);
    std::vector<double> errors;
    for (double dt : dts)
        errors.push_back(relative_l2(split_run(state, grid, potential, dt, t, consts).values, reference.values));
    double worst = 0.0;
    std::string ratios;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double ratio = errors[i] / errors[i + 1];
        worst = std::max(worst, std::abs(ratio / 4.0 - 1.0));
        ratios += (i ? " " : "") + format_number(std::round(ratio * 1000.0) / 1000.0);
    }
    return {worst, ratios};
}

ScenarioResult run_propagators(const Scenario& s, const std::filesystem::path&)
{
    ScenarioResult result;
    const WellStateSpec& spec = well_state(s);
    const PhysicalConstants consts;
    const double t = parameter_or<double>(s, "check_time", s.record_length);

    const double main_error = split_error_free(spec, s.grid, s.dt, t, consts);
    record(result.report, s, "split_vs_moshinsky_relative_l2", main_error);

    const Grid1D halving = grid_parameter(s, "halving_grid");
    const double e1 = split_error_free(spec, halving, s.dt, t, consts);
    const double e2 = split_error_free(spec, halving, 0.5 * s.dt, t, consts);
    record(result.report, s, "dt_halving_deviation_free", std::abs(e1 / e2 / 4.0 - 1.0),
           "error ratio " + format_number(e1 / e2) + " (" + format_number(e1) + " / " + format_number(e2) +
               "); free kinetic steps are exact in time");

    const Grid1D order_grid = grid_parameter(s, "order_grid");
    const auto dts = parameter<std::vector<double>>(s, "order_dts");
    if (dts.size() < 2)
        throw ScenarioError(s.name + ": order_dts needs at least two steps");
    const double V0 = parameter<double>(s, "order_V0");
    const double t_order = parameter<double>(s, "order_time");
    const double dt_ref = parameter<double>(s, "order_reference_dt");

    // smooth step V0 (1 + tanh(x/w))/2 acting on the Gaussian packet
    const double width = parameter<double>(s, "smooth_width");
    SampledPotential smooth;
    for (std::size_t j = 0; j < order_grid.n; ++j)
        smooth.values.push_back(0.5 * V0 * (1.0 + std::tanh(order_grid.x(j) / width)));
    const StateSpec gaussian = GaussianStateSpec{};
    const auto smooth_order = halving_ratios(gaussian, order_grid, smooth, dts, dt_ref, t_order, consts);
    record(result.report, s, "dt_halving_deviation_smooth", smooth_order.first,
           "successive error ratios " + smooth_order.second);

    WellStateSpec boosted = spec;
    boosted.p_avg = parameter_or<double>(s, "order_p_avg", spec.p_avg);
    const auto sharp_order = halving_ratios(boosted, order_grid, StepPotential{V0}, dts, dt_ref, t_order, consts);
    record(result.report, s, "dt_halving_deviation_step", sharp_order.first,
           "successive error ratios " + sharp_order.second + ", sharp step");
    return result;
}

// ---------------------------------------------------------------- step relation

struct StepSimulation {
    Signal signal;
    double norm_drift = 0.0;
};

StepSimulation step_simulation(const Scenario& s)
{
    EvolutionOptions options;
    options.edges = s.edge_monitor();
    options.probe_x = s.probes.front();
    EvolutionRecord rec =
        evolve_split_operator(make_initial_state(s.state, s.grid), s.potential, s.time_grid(), {}, options);
    return StepSimulation{extract_signal(rec), rec.norm_drift()};
}

ScenarioResult run_step_relation(const Scenario& s, const std::filesystem::path& dir)
{
    ScenarioResult result;
    const auto* step = std::get_if<StepPotential>(&s.potential);
    if (!step)
        throw ScenarioError(s.name + ": step_relation needs a step potential");
    if (s.probes.empty() || s.probes.front() != 0.0)
        throw ScenarioError(s.name + ": step_relation needs a probe at x = 0");
    const StepSpec step_spec{step->V0};
    const PhysicalConstants consts;
    const auto [lo, hi] = range_parameter(s, "band");
    const auto [plot_lo, plot_hi] = range_parameter(s, "plot_range");
    const std::string part = parameter_or<std::string>(s, "part", "real");
    if (part != "real" && part != "imag")
        throw ScenarioError(s.name + ": part must be \"real\" or \"imag\"");

    const StepSimulation sim = step_simulation(s);
    const Signal releveled = relevel_to_upper(sim.signal, step_spec, consts);
    const EnergySpectrum spectrum = energy_spectrum(releveled, consts);
    const MomentumAmplitude amp = MomentumAmplitude::analytic(s.state, consts);
    const double dE = spectrum.energy_spacing();

    auto band_error = [&](double a, double b) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
            const double E = spectrum.energies[i];
            if (E < a || E > b || std::abs(E + step_spec.V0) < 1e-9 * dE)
                continue;
            const Complex rhs = step_relation_rhs(amp, E, step_spec);
            num += std::norm(spectrum.values[i] - rhs);
            den += std::norm(rhs);
        }
        return std::sqrt(num / den);
    };

    const double central = band_error(lo, hi);
    record(result.report, s, "relative_l2_band", central,
           "E' in [" + format_number(lo) + ", " + format_number(hi) + "]");
    record(result.report, s, "negative_fraction", negative_energy_fraction(spectrum), "weight of E' < 0 in |chi_s|^2");
    if (s.parameters.contains("divergence_band")) {
        const auto [dlo, dhi] = range_parameter(s, "divergence_band");
        const double divergence = band_error(dlo, dhi);
        record(result.report, s, "divergence_relative_l2", divergence,
               "E' in [" + format_number(dlo) + ", " + format_number(dhi) + "]");
        record(result.report, s, "divergence_excess", divergence - central, "divergence minus central band error");
    }
    record(result.report, s, "norm_drift", sim.norm_drift);

    if (s.wants("spectrum")) {
        std::vector<std::vector<double>> cols(3);
        for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
            const double E = spectrum.energies[i];
            if (E < plot_lo || E > plot_hi || std::abs(E + step_spec.V0) < 1e-9 * dE)
                continue;
            const Complex rhs = step_relation_rhs(amp, E, step_spec);
            cols[0].push_back(E);
            cols[1].push_back(part == "real" ? spectrum.values[i].real() : spectrum.values[i].imag());
            cols[2].push_back(part == "real" ? rhs.real() : rhs.imag());
        }
        const std::string p = part == "real" ? "re" : "im";
        const auto path = output_path(dir, s, "spectrum");
        write_csv_file(path.string(), {"E_upper", p + "_chi_s", p + "_rhs"}, cols);
        result.files.push_back(path);
    }
    if (s.wants("signal")) {
        const auto path = output_path(dir, s, "signal");
        std::ofstream file(path, std::ios::binary);
        write_signal_csv(file, releveled);
        result.files.push_back(path);
    }
    return result;
}

// ---------------------------------------------------------------- arrival

ScenarioResult run_arrival(const Scenario& s, const std::filesystem::path& dir)
{
    ScenarioResult result;
    const WellStateSpec& spec = well_state(s);
    if (!is_free(s.potential))
        throw ScenarioError(s.name + ": arrival needs the free potential");
    const PhysicalConstants consts;
    const double X = parameter<double>(s, "X");
    const double expected = parameter_or<double>(s, "expected", 0.5);

    AsymptoticOptions options;
    options.interval = parameter_or<double>(s, "interval", options.interval);
    options.tolerance = parameter_or<double>(s, "stop_tolerance", options.tolerance);
    options.t_max = parameter_or<double>(s, "t_max", options.t_max);
    options.edges = s.edge_monitor();
    const WaveField initial = make_initial_state(s.state, s.grid, consts);
    const AsymptoticRightNorm asym = asymptotic_right_norm(initial, X, consts, options);

    const double arrival = arrival_probability(MomentumAmplitude::analytic(s.state, consts));
    const Signal signal = extract_signal(moshinsky_probe_record(spec, s.time_grid(), 0.0, consts));
    const EnergySpectrum spectrum = energy_spectrum(signal, consts);
    const double energy_side = energy_side_arrival(spectrum, consts);

    record(result.report, s, "right_norm_minus_arrival", std::abs(asym.value - arrival),
           "right norm " + format_number(asym.value) + " at t = " + format_number(asym.time) +
               (asym.converged ? "" : ", stopping rule not met"));
    record(result.report, s, "arrival_minus_expected", std::abs(arrival - expected));
    record(result.report, s, "energy_side_minus_expected", std::abs(energy_side - expected),
           "energy side " + format_number(energy_side));
    record(result.report, s, "sampled_arrival", arrival_probability(momentum_transform(initial, consts)),
           "positive-momentum weight on the grid");
    record(result.report, s, "energy_overlap_total", energy_overlap_total(spectrum, consts),
           "full-line energy integral, not a probability");

    if (s.wants("right_norm")) {
        std::vector<std::vector<double>> cols(2);
        for (const RightNormSample& r : asym.history) {
            cols[0].push_back(r.time);
            cols[1].push_back(r.right_norm);
        }
        const auto path = output_path(dir, s, "right_norm");
        write_csv_file(path.string(), {"t", "right_norm"}, cols);
        result.files.push_back(path);
    }
    return result;
}

} // namespace

ScenarioResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir)
{
    const auto start = Clock::now();
    std::filesystem::create_directories(out_dir);
    ScenarioResult result;
    switch (scenario.experiment) {
    case ExperimentKind::free_density:
        result = run_free_density(scenario, out_dir);
        break;
    case ExperimentKind::free_equivalence:
        result = run_free_equivalence(scenario, out_dir);
        break;
    case ExperimentKind::propagators:
        result = run_propagators(scenario, out_dir);
        break;
    case ExperimentKind::step_relation:
        result = run_step_relation(scenario, out_dir);
        break;
    case ExperimentKind::arrival:
        result = run_arrival(scenario, out_dir);
        break;
    }
    result.runtime_s = seconds_since(start);
    if (scenario.checks.count("runtime_s"))
        record(result.report, scenario, "runtime_s", result.runtime_s);
    result.report.set_runtime(scenario.name, result.runtime_s);
    return result;
}

} // namespace sourcewave
