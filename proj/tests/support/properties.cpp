#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sourcewave::testing {

namespace {

constexpr unsigned seed = 20240607;

double relative_l2(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
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

std::vector<Complex> random_points(std::size_t count, double half_width)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-half_width, half_width);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(u(rng), u(rng));
    return out;
}

Grid1D figure_grid() { return Grid1D::make(-60.0, 60.0, 8192); }

EdgeMonitor no_edges() { return EdgeMonitor{1.0, 0.05, false}; }

Signal free_signal(double T, double dt)
{
    return extract_signal(moshinsky_probe_record(WellStateSpec{}, TimeGrid::spanning(0.0, T, dt)));
}

WaveField split_final(const StateSpec& state, const Grid1D& grid, const PotentialProfile& potential, double dt,
                      double t)
{
    EvolutionOptions options;
    options.edges = no_edges();
    options.record_probe = false;
    options.snapshot_times = {t};
    EvolutionRecord rec =
        evolve_split_operator(make_initial_state(state, grid), potential, TimeGrid::spanning(0.0, t, dt), {}, options);
    return std::move(rec.snapshots.back());
}

} // namespace

// ---------------------------------------------------------------- numerics

PropertyResult q_squared_identity()
{
    const double p0 = std::sqrt(10.0);
    double worst = 0.0;
    for (const Complex& p : random_points(400, 10.0)) {
        const Complex q = q_of_p(p, p0);
        worst = std::max(worst, std::abs(q * q + p0 * p0 - p * p) / std::max(std::norm(p), p0 * p0));
    }
    return {"q^2 + p0^2 = p^2", worst, 1e-12};
}

PropertyResult p_plus_squared_identity()
{
    double worst = 0.0;
    for (const Complex& E : random_points(400, 20.0)) {
        const Complex p = p_plus(E, 1.0);
        worst = std::max(worst, std::abs(p * p - 2.0 * E) / std::abs(2.0 * E));
    }
    return {"p_plus^2 = 2mE", worst, 1e-12};
}

PropertyResult faddeeva_reflection()
{
    double worst = 0.0;
    for (const Complex& z : random_points(400, 4.0)) {
        const Complex a = faddeeva_w(z), b = faddeeva_w(-z), g = 2.0 * std::exp(-z * z);
        const double scale = std::max({std::abs(a), std::abs(b), std::abs(g)});
        worst = std::max(worst, std::abs(a + b - g) / scale);
    }
    return {"w(z) + w(-z) = 2 exp(-z^2)", worst, 1e-10};
}

PropertyResult q_continuity_at_threshold()
{
    const double p0 = std::sqrt(10.0), eps = 1e-12;
    const double worst = std::max({std::abs(q_of_p(p0 + eps, p0)), std::abs(q_of_p(p0 - eps, p0)),
                                   std::abs(q_of_p(Complex(p0, eps), p0)), std::abs(q_of_p(-p0 + eps, p0))});
    return {"q -> 0 at the threshold from every side", worst, 1e-5};
}

// ---------------------------------------------------------------- states

PropertyResult support_left_of_origin()
{
    double worst = 0.0;
    for (const StateSpec& state : {StateSpec{WellStateSpec{}}, StateSpec{WellStateSpec{-2.01, -0.01, 1.0}},
                                   StateSpec{GaussianStateSpec{-5.0, 1.0, 0.5}}}) {
        const WaveField f = make_initial_state(state, figure_grid());
        double right = 0.0;
        for (std::size_t j = 0; j < f.grid.n; ++j) {
            if (f.grid.x(j) >= 0.0)
                right = std::max(right, std::abs(f.values[j]));
        }
        worst = std::max(worst, right / max_abs(f.values));
    }
    return {"initial states vanish on x >= 0", worst, 1e-6};
}

PropertyResult unboosted_split_conjugacy()
{
    const WaveField f = well_ground_state(WellStateSpec{}, figure_grid());
    const WaveField plus = momentum_split(f, MomentumSign::positive, 0.0);
    const WaveField minus = momentum_split(f, MomentumSign::negative, 0.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j)
        worst = std::max(worst, std::abs(std::abs(plus.values[j]) - std::abs(minus.values[j])));
    return {"|psi_+(x,0)| = |psi_-(x,0)| for the unboosted well", worst / max_abs(f.values), 1e-12};
}

PropertyResult analytic_matches_sampled_amplitude()
{
    const Grid1D grid = Grid1D::make(-60.0, 60.0, 65536);
    double worst = 0.0;
    for (const StateSpec& state : {StateSpec{WellStateSpec{}}, StateSpec{WellStateSpec{-2.01, -0.01, 1.0}},
                                   StateSpec{GaussianStateSpec{}}}) {
        const MomentumAmplitude sampled = momentum_transform(make_initial_state(state, grid));
        const double band = 0.5 * grid.nyquist_momentum(1.0);
        double diff = 0.0, peak = 0.0;
        for (std::size_t k = 0; k < sampled.momenta().size(); ++k) {
            const double p = sampled.momenta()[k];
            if (std::abs(p) > band)
                continue;
            const Complex exact = momentum_amplitude(state, p);
            diff = std::max(diff, std::abs(sampled.values()[k] - exact));
            peak = std::max(peak, std::abs(exact));
        }
        worst = std::max(worst, diff / peak);
    }
    return {"sampled amplitude matches the closed form for |p| <= p_Nyquist/2", worst, 1e-6};
}

// ---------------------------------------------------------------- propagation

PropertyResult free_routes_agree(double t, const Grid1D& grid, double tolerance)
{
    const WellStateSpec spec;
    const WaveField spectral = evolve_free_spectral(well_ground_state(spec, grid), t, {}, no_edges());
    double worst = 0.0;
    {
        const WaveField split = split_final(spec, grid, FreePotential{}, 1e-3, t);
        worst = relative_l2(split.values, spectral.values);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const Complex exact = evolve_free_moshinsky(spec, grid.x(j), t);
        num += std::norm(spectral.values[j] - exact);
        den += std::norm(exact);
    }
    worst = std::max(worst, std::sqrt(num / den));
    return {"closed form, spectral and split free evolution agree at t=" + std::to_string(static_cast<int>(t)), worst,
            tolerance};
}

PropertyResult spectral_norm_conservation()
{
    const WaveField f = well_ground_state(WellStateSpec{}, figure_grid());
    const WaveField g = evolve_free_spectral(f, 5.0, {}, no_edges());
    return {"spectral evolution conserves the norm", std::abs(g.norm_squared() - f.norm_squared()), 1e-12};
}

PropertyResult split_norm_drift()
{
    EvolutionOptions options;
    options.edges = no_edges();
    const EvolutionRecord rec =
        evolve_split_operator(well_ground_state(WellStateSpec{-2.01, -0.01, 1.0}, figure_grid()), StepPotential{5.0},
                              TimeGrid::make(0.0, 1e-3, 10000), {}, options);
    return {"split-operator norm drift over 1e4 steps", rec.norm_drift(), 1e-12};
}

PropertyResult split_second_order()
{
    const Grid1D grid = figure_grid();
    SampledPotential smooth;
    for (std::size_t j = 0; j < grid.n; ++j)
        smooth.values.push_back(2.5 * (1.0 + std::tanh(grid.x(j) / 0.5)));
    const StateSpec state = GaussianStateSpec{};
    const WaveField reference = split_final(state, grid, smooth, 1e-4, 1.0);
    std::vector<double> errors;
    for (double dt : {2e-2, 1e-2, 5e-3})
        errors.push_back(relative_l2(split_final(state, grid, smooth, dt, 1.0).values, reference.values));
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        worst = std::max(worst, std::abs(errors[i] / errors[i + 1] / 4.0 - 1.0));
    return {"halving dt divides the split-operator error by 4 (smooth potential)", worst, 0.3};
}

PropertyResult probe_gated_before_release()
{
    const Signal s = free_signal(5.0, 1e-2);
    const double worst = std::max({std::abs(s.at(-1.0)), std::abs(s.at(-1e-9)), std::abs(s.values.front())});
    return {"probe signal vanishes for t <= 0", worst, 0.0};
}

// ---------------------------------------------------------------- source

PropertyResult causality_perturbation()
{
    Signal s = free_signal(50.0, 1e-2);
    const double t = s.tgrid.time(1000);
    const Complex before = reconstruct_time_domain(s, 1.0, t);
    for (std::size_t k = 1001; k < s.values.size(); ++k)
        s.values[k] += Complex(0.3, -0.7);
    const Complex after = reconstruct_time_domain(s, 1.0, t);
    return {"time-domain reconstruction ignores later signal values", std::abs(after - before), 1e-14};
}

PropertyResult vanishing_theorem()
{
    const Signal s = free_signal(200.0, 1e-2);
    const EnergySpectrum spectrum = energy_spectrum(s);
    double worst = 0.0;
    for (double x : {0.5, 2.0}) {
        for (double t : {-1.0, -5.0})
            worst = std::max(worst, std::abs(reconstruct_energy_domain(spectrum, x, t)));
    }
    return {"energy reconstruction vanishes for t < 0", worst / s.max_abs(), 1e-3};
}

PropertyResult evanescent_decay()
{
    const EnergySpectrum spectrum = energy_spectrum(free_signal(200.0, 1e-2));
    double previous = std::abs(reconstruct_energy_domain_parts(spectrum, 0.0, 5.0).negative);
    const double start = previous;
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double x = 0.125 * i;
        const double current = std::abs(reconstruct_energy_domain_parts(spectrum, x, 5.0).negative);
        worst = std::max(worst, (current - previous) / start);
        previous = current;
    }
    return {"negative-energy part decreases monotonically in x", worst, 0.0};
}

PropertyResult spectrum_parseval()
{
    const Signal s = free_signal(200.0, 1e-2);
    const EnergySpectrum spectrum = energy_spectrum(s);
    double spectral = 0.0, temporal = 0.0;
    for (const Complex& v : spectrum.values)
        spectral += std::norm(v);
    spectral *= spectrum.energy_spacing();
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        const double w = (k == 0 || k + 1 == s.values.size()) ? 0.5 : 1.0;
        temporal += std::norm(w * s.values[k]);
    }
    temporal *= s.tgrid.dt;
    return {"Parseval for the energy transform", std::abs(spectral - temporal) / temporal, 1e-8};
}

PropertyResult momentum_split_partition()
{
    const WaveField f = well_ground_state(WellStateSpec{-2.01, -0.01, 0.5}, figure_grid());
    const double t = 2.0;
    const WaveField psi = evolve_free_spectral(f, t, {}, no_edges());
    const WaveField plus = momentum_split(f, MomentumSign::positive, t);
    const WaveField minus = momentum_split(f, MomentumSign::negative, t);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j)
        worst = std::max(worst, std::abs(plus.values[j] + minus.values[j] - psi.values[j]));
    return {"psi_+ + psi_- = psi", worst / max_abs(psi.values), 1e-10};
}

// ---------------------------------------------------------------- scattering

PropertyResult step_flux_unitarity()
{
    const StepSpec spec{5.0};
    const double p0 = spec.p0(1.0);
    double worst = 0.0;
    for (int i = 1; i <= 200; ++i) {
        const double p = p0 + 0.1 * i;
        const Complex q = q_of_p(p, p0);
        const Complex T = transmission_step(p, spec), R = reflection_step(p, spec);
        worst = std::max(worst, std::abs(q.real() / p * std::norm(T) + std::norm(R) - 1.0));
    }
    return {"step flux unitarity above threshold", worst, 1e-12};
}

PropertyResult evanescent_zero_flux()
{
    const StepSpec spec{5.0};
    const double p0 = spec.p0(1.0);
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double p = p0 * i / 100.0;
        const Complex T = transmission_step(p, spec);
        worst = std::max(worst, std::abs(q_of_p(p, p0).real()) + (std::abs(T) == 0.0 ? 1.0 : 0.0));
    }
    return {"no transmitted flux below threshold while T != 0", worst, 0.0};
}

PropertyResult zero_step_matches_free_relation()
{
    const MomentumAmplitude amp = MomentumAmplitude::analytic(WellStateSpec{-2.01, -0.01, 1.0});
    double worst = 0.0;
    for (int i = -50; i <= 50; ++i) {
        if (i == 0)
            continue;
        const double E = 0.1 * i + 0.013;
        const Complex free = chi_from_initial_state(amp, E);
        worst = std::max(worst, std::abs(step_relation_rhs(amp, E, StepSpec{0.0}) - free) / std::abs(free));
    }
    return {"zero-height step reduces to the free relation", worst, 1e-12};
}

PropertyResult boost_shifts_arrival()
{
    const double boost = 0.7;
    const WellStateSpec rest;
    const double shifted = arrival_probability(MomentumAmplitude::analytic(WellStateSpec{rest.a, rest.b, boost}));
    const Complex direct =
        integrate([&](double p) { return Complex(std::norm(momentum_amplitude_well(rest, p))); }, -boost, 2000.0, 8000);
    // tail past 2000 from the p^-4 decay of |psi~|^2, averaged over its oscillation
    const double pw = rest.p_w(1.0);
    const double tail = 2.0 * pw * pw / (3.0 * std::numbers::pi * rest.width() * std::pow(2000.0, 3));
    return {"a momentum boost shifts the arrival probability", std::abs(shifted - direct.real() - tail), 1e-8};
}

PropertyResult negative_energy_dominance()
{
    const StepSpec spec{5.0};
    const MomentumAmplitude amp = MomentumAmplitude::analytic(WellStateSpec{-2.01, -0.01, 1.0});
    double negative = 0.0, total = 0.0, flux = 0.0;
    const double dE = 1e-3;
    for (double E = -spec.V0 - 40.0 + 0.5 * dE; E < 40.0; E += dE) {
        const double w = std::norm(step_relation_rhs(amp, E, spec));
        total += w;
        if (E < 0.0) {
            negative += w;
            const Complex p = p_plus(E + spec.V0, 1.0);
            const Complex q = q_of_p(p, spec.p0(1.0));
            flux = std::max(flux, std::abs(q.real()) * std::norm(transmission_step(p, spec)));
        }
    }
    return {"negative upper-level energies dominate yet carry no transmitted flux", 0.5 - negative / total + flux, 0.0,
            true};
}

PropertyResult barrier_unitarity()
{
    double worst = 0.0;
    for (const BarrierSpec& spec : {BarrierSpec{1.0, -1.0, 0.0}, BarrierSpec{2.0, -3.0, -1.0}, BarrierSpec{-1.0, -2.0, 0.0}}) {
        for (int i = 1; i <= 100; ++i) {
            const double p = 0.1 * i;
            worst = std::max(worst, std::abs(std::norm(transmission_square_barrier(p, spec)) +
                                             std::norm(reflection_square_barrier(p, spec)) - 1.0));
        }
    }
    return {"barrier |T|^2 + |R|^2 = 1", worst, 1e-12};
}

PropertyResult barrier_matches_stationary_integration()
{
    double worst = 0.0;
    for (const BarrierSpec& spec : {BarrierSpec{1.0, -1.0, 0.0}, BarrierSpec{-0.5, -2.0, -0.5}}) {
        for (int i = 1; i <= 20; ++i) {
            const double p = 0.2 * i;
            const StationaryAmplitudes rk = integrate_barrier(p, spec);
            worst = std::max({worst, std::abs(transmission_square_barrier(p, spec) - rk.transmission),
                              std::abs(reflection_square_barrier(p, spec) - rk.reflection)});
        }
    }
    return {"barrier amplitudes match stationary RK4 integration", worst, 1e-9};
}

std::vector<PropertyResult> property_suite()
{
    return {q_squared_identity(),
            p_plus_squared_identity(),
            faddeeva_reflection(),
            q_continuity_at_threshold(),
            support_left_of_origin(),
            unboosted_split_conjugacy(),
            analytic_matches_sampled_amplitude(),
            free_routes_agree(1.0, Grid1D::make(-8192.0, 8192.0, std::size_t{1} << 24), 1e-5),
            spectral_norm_conservation(),
            split_norm_drift(),
            split_second_order(),
            probe_gated_before_release(),
            causality_perturbation(),
            vanishing_theorem(),
            evanescent_decay(),
            spectrum_parseval(),
            momentum_split_partition(),
            step_flux_unitarity(),
            evanescent_zero_flux(),
            zero_step_matches_free_relation(),
            boost_shifts_arrival(),
            negative_energy_dominance(),
            barrier_unitarity(),
            barrier_matches_stationary_integration()};
}

// ---------------------------------------------------------------- oracles

long double erfc_series(long double x)
{
    long double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    return 1.0L - 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

StationaryAmplitudes integrate_barrier(double p, const BarrierSpec& spec, std::size_t steps,
                                       const PhysicalConstants& consts)
{
    const double k = p / consts.hbar;
    const double E = p * p / (2.0 * consts.mass);
    const double coupling = 2.0 * consts.mass / (consts.hbar * consts.hbar) * (spec.V0 - E);
    // psi'' = coupling psi inside, integrated from d down to c
    Complex psi = std::exp(I * k * spec.d), dpsi = I * k * psi;
    const double h = -(spec.d - spec.c) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const Complex k1 = dpsi, l1 = coupling * psi;
        const Complex k2 = dpsi + 0.5 * h * l1, l2 = coupling * (psi + 0.5 * h * k1);
        const Complex k3 = dpsi + 0.5 * h * l2, l3 = coupling * (psi + 0.5 * h * k2);
        const Complex k4 = dpsi + h * l3, l4 = coupling * (psi + h * k3);
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        dpsi += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    const Complex A = 0.5 * (psi + dpsi / (I * k)) * std::exp(-I * k * spec.c);
    const Complex B = 0.5 * (psi - dpsi / (I * k)) * std::exp(I * k * spec.c);
    return {1.0 / A, B / A};
}

Complex integrate(const std::function<Complex(double)>& f, double a, double b, std::size_t panels, std::size_t order)
{
    const QuadratureRule& rule = gauss_legendre(order);
    const double width = (b - a) / static_cast<double>(panels);
    Complex sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double mid = a + (static_cast<double>(i) + 0.5) * width;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            sum += rule.weights[j] * f(mid + 0.5 * width * rule.nodes[j]);
    }
    return 0.5 * width * sum;
}

} // namespace sourcewave::testing
