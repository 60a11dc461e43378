#include "sourcewave/propagation.hpp"

#include "sourcewave/fft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sourcewave {

namespace {

Complex unit_phase(double phase)
{
    const Complex z{std::cos(phase), std::sin(phase)};
    return z / std::abs(z);
}

// exp(i m X^2 / 2 t hbar) w(-u) with u = (s p_w - m X / t) / f. Where -u falls
// in the lower half-plane the reflected form keeps the huge Gaussian factors
// from ever being formed.
Complex shutter_term(double X, double s, double t, double p_w, const PhysicalConstants& c)
{
    const Complex f = Complex{1.0, -1.0} * std::sqrt(c.mass * c.hbar / t);
    const Complex u = (s * p_w - c.mass * X / t) / f;
    const Complex chirp = unit_phase(c.mass * X * X / (2.0 * t * c.hbar));
    if ((-u).imag() >= 0.0)
        return chirp * faddeeva_w(-u);
    const double plane = s * p_w * X / c.hbar - p_w * p_w * t / (2.0 * c.mass * c.hbar);
    return 2.0 * unit_phase(plane) - chirp * faddeeva_w(u);
}

Complex moshinsky_unboosted(const WellStateSpec& spec, double x, double t, const PhysicalConstants& c)
{
    const double p_w = spec.p_w(c.hbar);
    const double D = spec.width();
    const Complex b_part = unit_phase(spec.k_w() * D) *
                           (shutter_term(x - spec.b, 1.0, t, p_w, c) - shutter_term(x - spec.b, -1.0, t, p_w, c));
    const Complex a_part = shutter_term(x - spec.a, -1.0, t, p_w, c) - shutter_term(x - spec.a, 1.0, t, p_w, c);
    return std::sqrt(2.0 / D) / (4.0 * I) * (b_part + a_part);
}

Complex well_initial_value(const WellStateSpec& spec, double x, const PhysicalConstants& c)
{
    if (!(x > spec.a && x < spec.b))
        return {0.0, 0.0};
    return std::sqrt(2.0 / spec.width()) * std::sin((x - spec.a) * spec.k_w()) * unit_phase(spec.p_avg * x / c.hbar);
}

std::vector<Complex> kinetic_phases(const Grid1D& grid, double dt, const PhysicalConstants& c)
{
    std::vector<Complex> phases(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double p = grid.momentum(k, c.hbar);
        phases[k] = unit_phase(-p * p * dt / (2.0 * c.mass * c.hbar));
    }
    return phases;
}

double norm_of_spectrum(const std::vector<Complex>& spectrum, const Grid1D& grid)
{
    double sum = 0.0;
    for (const Complex& v : spectrum)
        sum += std::norm(v);
    return sum * grid.dx() / static_cast<double>(grid.n);
}

std::vector<std::size_t> snapshot_steps(const std::vector<double>& times, const TimeGrid& tgrid)
{
    std::vector<std::size_t> steps;
    for (const double t : times) {
        const double s = std::round((t - tgrid.t0) / tgrid.dt);
        if (s < 0.0 || s > static_cast<double>(tgrid.n_steps))
            fail(ErrorKind::configuration, "evolve_split_operator", "snapshot time outside the time grid");
        steps.push_back(static_cast<std::size_t>(s));
    }
    return steps;
}

void finish_probe(EvolutionRecord& record, const TimeGrid& tgrid, double probe_x, std::vector<Complex> values)
{
    TimeGrid recorded = tgrid;
    recorded.n_steps = values.size() - 1;
    if (recorded.n_steps == 0)
        return;
    record.probe = Signal{probe_x, recorded, std::move(values), true};
}

} // namespace

void validate(const PotentialProfile& potential, std::string_view operation)
{
    const std::string op(operation);
    if (const auto* step = std::get_if<StepPotential>(&potential)) {
        if (!(step->V0 > 0.0) || !std::isfinite(step->V0))
            fail(ErrorKind::domain, op, "step height must be positive and finite");
    } else if (const auto* barrier = std::get_if<SquareBarrierPotential>(&potential)) {
        if (!std::isfinite(barrier->V0) || !std::isfinite(barrier->c) || !std::isfinite(barrier->d))
            fail(ErrorKind::domain, op, "barrier parameters must be finite");
        if (!(barrier->c <= barrier->d) || barrier->d > 0.0)
            fail(ErrorKind::geometry, op, "barrier support needs c <= d <= 0");
    } else if (const auto* sampled = std::get_if<SampledPotential>(&potential)) {
        for (const double v : sampled->values)
            require_finite(v, operation);
    }
}

bool is_free(const PotentialProfile& potential) noexcept
{
    return std::holds_alternative<FreePotential>(potential);
}

std::vector<double> sample_potential(const PotentialProfile& potential, const Grid1D& grid)
{
    validate(potential, "sample_potential");
    std::vector<double> values(grid.n, 0.0);
    if (const auto* step = std::get_if<StepPotential>(&potential)) {
        for (std::size_t j = 0; j < grid.n; ++j)
            values[j] = grid.x(j) >= 0.0 ? step->V0 : 0.0;
    } else if (const auto* barrier = std::get_if<SquareBarrierPotential>(&potential)) {
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double x = grid.x(j);
            values[j] = (x >= barrier->c && x <= barrier->d) ? barrier->V0 : 0.0;
        }
    } else if (const auto* sampled = std::get_if<SampledPotential>(&potential)) {
        if (sampled->values.size() != grid.n)
            fail(ErrorKind::configuration, "sample_potential", "sampled potential length does not match the grid");
        values = sampled->values;
    }
    return values;
}

double edge_ratio(const WaveField& field, double fraction)
{
    const std::size_t n = field.values.size();
    const auto strip = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
    double peak = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double rho = std::norm(field.values[j]);
        peak = std::max(peak, rho);
        if (j < strip || j >= n - strip)
            edge = std::max(edge, rho);
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

void check_edges(const WaveField& field, const EdgeMonitor& monitor, std::string_view operation)
{
    if (!monitor.enabled)
        return;
    const double ratio = edge_ratio(field, monitor.fraction);
    if (ratio > monitor.threshold)
        fail(ErrorKind::domain_overflow, std::string(operation),
             "edge density reached " + std::to_string(ratio) + " of the peak at t = " + std::to_string(field.time));
}

double EvolutionRecord::norm_drift() const
{
    double drift = 0.0;
    for (const NormSample& s : norm_history)
        drift = std::max(drift, std::abs(s.norm - norm_history.front().norm));
    return drift;
}

const WaveField& EvolutionRecord::snapshot_at(double time) const
{
    const WaveField* best = nullptr;
    for (const WaveField& s : snapshots) {
        if (!best || std::abs(s.time - time) < std::abs(best->time - time))
            best = &s;
    }
    if (!best)
        fail(ErrorKind::configuration, "EvolutionRecord::snapshot_at", "record holds no snapshots");
    return *best;
}

EvolutionOverflow::EvolutionOverflow(std::string operation, const std::string& message, EvolutionRecord partial)
    : Error(ErrorKind::domain_overflow, std::move(operation), message), partial_(std::move(partial))
{
}

Complex free_propagator_kernel(double x, double x_prime, double t, double t_prime, const PhysicalConstants& consts)
{
    validate(consts, "free_propagator_kernel");
    const double tau = t - t_prime;
    if (tau == 0.0)
        fail(ErrorKind::singular_kernel, "free_propagator_kernel", "kernel is a delta function at t = t'");
    const double dx = x - x_prime;
    const double modulus = std::sqrt(consts.mass / (consts.planck() * std::abs(tau)));
    const double root_phase = tau > 0.0 ? -0.25 * std::numbers::pi : 0.25 * std::numbers::pi;
    return modulus * unit_phase(root_phase + consts.mass * dx * dx / (2.0 * consts.hbar * tau));
}

Complex evolve_free_moshinsky(const WellStateSpec& spec, double x, double t, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "evolve_free_moshinsky";
    validate(spec, op);
    validate(consts, op);
    require_finite(x, op);
    if (!(t > 0.0) || !std::isfinite(t))
        fail(ErrorKind::domain, std::string(op), "time must be positive and finite");
    if (spec.p_avg == 0.0)
        return moshinsky_unboosted(spec, x, t, consts);
    WellStateSpec rest = spec;
    rest.p_avg = 0.0;
    const double pa = spec.p_avg;
    const double shift = pa * t / consts.mass;
    return unit_phase((pa * x - pa * pa * t / (2.0 * consts.mass)) / consts.hbar) *
           moshinsky_unboosted(rest, x - shift, t, consts);
}

WaveField evolve_free_moshinsky(const WellStateSpec& spec, const Grid1D& grid, double t,
                                const PhysicalConstants& consts)
{
    validate(grid, "evolve_free_moshinsky");
    WaveField field{grid, std::vector<Complex>(grid.n), t};
    for (std::size_t j = 0; j < grid.n; ++j)
        field.values[j] = evolve_free_moshinsky(spec, grid.x(j), t, consts);
    return field;
}

EvolutionRecord moshinsky_probe_record(const WellStateSpec& spec, const TimeGrid& tgrid, double probe_x,
                                       const PhysicalConstants& consts)
{
    validate(tgrid, "moshinsky_probe_record");
    if (tgrid.t0 != 0.0)
        fail(ErrorKind::configuration, "moshinsky_probe_record", "records start at the release time t0 = 0");
    std::vector<Complex> values(tgrid.samples());
    values[0] = well_initial_value(spec, probe_x, consts);
    for (std::size_t k = 1; k < values.size(); ++k)
        values[k] = evolve_free_moshinsky(spec, probe_x, tgrid.time(k), consts);
    EvolutionRecord record;
    finish_probe(record, tgrid, probe_x, std::move(values));
    return record;
}

WaveField evolve_free_spectral(WaveField field, double t, const PhysicalConstants& consts,
                               const EdgeMonitor& monitor)
{
    constexpr std::string_view op = "evolve_free_spectral";
    validate(field.grid, op);
    validate(consts, op);
    require_finite(t, op);
    if (field.values.size() != field.grid.n)
        fail(ErrorKind::configuration, std::string(op), "field length does not match its grid");
    field.time += t;
    if (t == 0.0)
        return field;
    const Fft fft(field.grid.n);
    fft.forward(field.values);
    const std::vector<Complex> phases = kinetic_phases(field.grid, t, consts);
    const double inv_n = 1.0 / static_cast<double>(field.grid.n);
    for (std::size_t k = 0; k < field.grid.n; ++k)
        field.values[k] *= phases[k] * inv_n;
    fft.backward(field.values);
    check_edges(field, monitor, op);
    return field;
}

EvolutionRecord evolve_split_operator(WaveField field, const PotentialProfile& potential, const TimeGrid& tgrid,
                                      const PhysicalConstants& consts, const EvolutionOptions& options)
{
    constexpr std::string_view op = "evolve_split_operator";
    const Grid1D grid = field.grid;
    validate(grid, op);
    validate(tgrid, op);
    validate(consts, op);
    validate(potential, op);
    if (field.values.size() != grid.n)
        fail(ErrorKind::configuration, std::string(op), "field length does not match its grid");

    std::optional<std::size_t> probe_node;
    if (options.record_probe) {
        probe_node = grid.node_at(options.probe_x);
        if (!probe_node)
            fail(ErrorKind::configuration, std::string(op), "probe position is not a grid node");
        if (tgrid.t0 != 0.0)
            fail(ErrorKind::configuration, std::string(op), "probe records start at the release time t0 = 0");
    }
    const std::vector<std::size_t> snaps = snapshot_steps(options.snapshot_times, tgrid);
    auto wants_snapshot = [&](std::size_t step) {
        return std::find(snaps.begin(), snaps.end(), step) != snaps.end();
    };

    const std::size_t n = grid.n;
    const double inv_n = 1.0 / static_cast<double>(n);
    const Fft fft(n);
    field.time = tgrid.t0;

    EvolutionRecord record;
    std::vector<Complex> probe;
    if (probe_node)
        probe.reserve(tgrid.samples());
    auto record_norm = [&](double time, double norm) { record.norm_history.push_back({time, norm}); };
    auto overflow = [&](const Error& err) {
        record.overflowed = true;
        if (probe_node)
            finish_probe(record, tgrid, options.probe_x, std::move(probe));
        throw EvolutionOverflow(std::string(op), err.what(), std::move(record));
    };

    if (probe_node)
        probe.push_back(field.values[*probe_node]);
    record_norm(field.time, field.norm_squared());
    if (wants_snapshot(0))
        record.snapshots.push_back(field);

    if (is_free(potential)) {
        // Momentum-space amplitudes; probe weights fold in the inverse-transform phase.
        std::vector<Complex> spectrum = std::move(field.values);
        fft.forward(spectrum);
        std::vector<Complex> weights;
        std::vector<Complex> kinetic;
        if (probe_node) {
            kinetic = kinetic_phases(grid, tgrid.dt, consts);
            weights.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * *probe_node) % n) * inv_n;
                weights[k] = spectrum[k] * unit_phase(angle) * inv_n;
            }
        }
        const double spectral_norm = norm_of_spectrum(spectrum, grid);
        for (std::size_t step = 1; step <= tgrid.n_steps; ++step) {
            if (probe_node) {
                Complex sum{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) {
                    weights[k] *= kinetic[k];
                    sum += weights[k];
                }
                probe.push_back(sum);
            }
            const bool last = step == tgrid.n_steps;
            if (!wants_snapshot(step) && !last)
                continue;
            const double elapsed = static_cast<double>(step) * tgrid.dt;
            WaveField current{grid, {}, tgrid.time(step)};
            if (last)
                current.values = std::move(spectrum);
            else
                current.values = spectrum;
            for (std::size_t k = 0; k < n; ++k) {
                const double p = grid.momentum(k, consts.hbar);
                current.values[k] *= unit_phase(-p * p * elapsed / (2.0 * consts.mass * consts.hbar)) * inv_n;
            }
            fft.backward(current.values);
            record_norm(current.time, spectral_norm);
            try {
                check_edges(current, options.edges, op);
            } catch (const Error& err) {
                if (wants_snapshot(step))
                    record.snapshots.push_back(std::move(current));
                overflow(err);
            }
            if (wants_snapshot(step))
                record.snapshots.push_back(std::move(current));
        }
    } else {
        const std::vector<Complex> kinetic = kinetic_phases(grid, tgrid.dt, consts);
        const std::vector<double> V = sample_potential(potential, grid);
        std::vector<Complex> half_kick(n);
        for (std::size_t j = 0; j < n; ++j)
            half_kick[j] = unit_phase(-V[j] * tgrid.dt / (2.0 * consts.hbar));
        for (std::size_t step = 1; step <= tgrid.n_steps; ++step) {
            for (std::size_t j = 0; j < n; ++j)
                field.values[j] *= half_kick[j];
            fft.forward(field.values);
            for (std::size_t k = 0; k < n; ++k)
                field.values[k] *= kinetic[k] * inv_n;
            fft.backward(field.values);
            for (std::size_t j = 0; j < n; ++j)
                field.values[j] *= half_kick[j];
            field.time = tgrid.time(step);

            if (probe_node)
                probe.push_back(field.values[*probe_node]);
            if (options.norm_interval > 0 && step % options.norm_interval == 0)
                record_norm(field.time, field.norm_squared());
            if (wants_snapshot(step))
                record.snapshots.push_back(field);
            const bool check = step == tgrid.n_steps ||
                               (options.edge_check_interval > 0 && step % options.edge_check_interval == 0);
            if (check) {
                try {
                    check_edges(field, options.edges, op);
                } catch (const Error& err) {
                    overflow(err);
                }
            }
        }
    }
    if (probe_node)
        finish_probe(record, tgrid, options.probe_x, std::move(probe));
    return record;
}

} // namespace sourcewave
