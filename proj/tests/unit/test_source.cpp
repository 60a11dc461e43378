#include "checks.hpp"

#include "sourcewave/source.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

using namespace sourcewave;
using testing::error_kind;
using testing::relative;
using testing::require;

namespace {

const double h = 2.0 * std::numbers::pi;

Signal free_signal(double T = 200.0, double dt = 1e-2)
{
    return extract_signal(moshinsky_probe_record(WellStateSpec{}, TimeGrid::spanning(0.0, T, dt)));
}

Signal constant_signal(Complex value, double T, double dt)
{
    Signal s;
    s.tgrid = TimeGrid::spanning(0.0, T, dt);
    s.values.assign(s.tgrid.samples(), value);
    return s;
}

/// 2 int_{u0}^inf exp(i beta u^2) du by Gauss-Legendre up to U and two
/// integration-by-parts terms beyond.
Complex fresnel_tail(double beta, double u0)
{
    const double U = 60.0;
    const Complex body = testing::integrate([&](double u) { return std::exp(I * beta * u * u); }, u0, U, 4000);
    const Complex phase = std::exp(I * beta * U * U);
    const Complex tail = -phase / (2.0 * I * beta * U) * (1.0 + 1.0 / (2.0 * I * beta * U * U));
    return 2.0 * (body + tail);
}

} // namespace

TEST_CASE("extract_signal needs a probe at the origin")
{
    CHECK(error_kind([] { extract_signal(EvolutionRecord{}); }) == ErrorKind::configuration);
    EvolutionRecord rec = moshinsky_probe_record(WellStateSpec{}, TimeGrid::make(0.0, 0.1, 10));
    rec.probe->probe_x = 1.0;
    CHECK(error_kind([&] { extract_signal(rec); }) == ErrorKind::configuration);
}

TEST_CASE("free signal starts at zero and is gated")
{
    const Signal s = free_signal(20.0);
    CHECK(s.gated);
    CHECK(s.values.front() == Complex(0.0));
    CHECK(s.at(-3.0) == Complex(0.0));
    CHECK(error_kind([&] { s.at(20.5); }) == ErrorKind::insufficient_record);
}

TEST_CASE("monochromatic signal passes through")
{
    const Signal s = monochromatic_signal(2.0, 0.0, TimeGrid::make(0.0, 1e-2, 500));
    for (double t : {0.0, 0.5, 1.37, 4.99})
        CHECK(std::abs(s.at(t) - std::exp(-2.0 * I * t)) < 2e-4);
    CHECK(std::abs(s.values[300] - std::exp(-2.0 * I * 3.0)) < 1e-14);
}

TEST_CASE("damped monochromatic spectrum against the closed-form integral")
{
    const double omega0 = 2.0, eta = 0.5, T = 100.0;
    auto worst_error = [&](double dt) {
        const EnergySpectrum spectrum =
            energy_spectrum(monochromatic_signal(omega0, eta, TimeGrid::spanning(0.0, T, dt)));
        double worst = 0.0;
        for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
            const double E = spectrum.energies[i];
            if (std::abs(E) > 10.0)
                continue;
            const Complex oracle = std::pow(h, -0.5) * I / (E - omega0 + I * eta);
            worst = std::max(worst, relative(spectrum.values[i], oracle));
        }
        return worst;
    };
    // sampling error falls as dt^2
    const double coarse = worst_error(1e-3), fine = worst_error(5e-4);
    CHECK(coarse < 2e-5);
    CHECK(fine < 5e-6);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
    const Signal s = monochromatic_signal(omega0, eta, TimeGrid::make(0.0, 1e-3, 100000));
    const EnergySpectrum spectrum = energy_spectrum(s);
    CHECK(std::exp(-eta * T) < 1e-20);

    // the damping option reproduces the damped signal from the bare one
    SpectrumOptions damped;
    damped.damping = eta;
    const EnergySpectrum viaopt = energy_spectrum(monochromatic_signal(omega0, 0.0, s.tgrid), {}, damped);
    double diff = 0.0;
    for (std::size_t i = 0; i < spectrum.values.size(); ++i)
        diff = std::max(diff, std::abs(viaopt.values[i] - spectrum.values[i]));
    CHECK(diff < 1e-12);
}

TEST_CASE("energy grid spacing follows the padded record")
{
    const Signal s = free_signal(20.0, 1e-2);
    const EnergySpectrum spectrum = energy_spectrum(s);
    const double M = static_cast<double>(std::bit_ceil(8 * s.values.size()));
    CHECK(spectrum.energy_spacing() == doctest::Approx(h / (M * 1e-2)).epsilon(1e-12));
    CHECK(spectrum.energies.front() == doctest::Approx(-std::numbers::pi / 1e-2));
    require(testing::spectrum_parseval());
}

TEST_CASE("chi from the initial state")
{
    const MomentumAmplitude amp = MomentumAmplitude::analytic(WellStateSpec{});
    const Complex expected = -I * std::sqrt(0.5) * momentum_amplitude_well(WellStateSpec{}, I * std::sqrt(2.0));
    CHECK(relative(chi_from_initial_state(amp, -1.0), expected) < 1e-14);
    for (double E : {0.1, 1.0, 4.5}) {
        const double p = std::sqrt(2.0 * E);
        const Complex overlap = chi_from_initial_state(amp, E) * std::pow(2.0 * E, 0.25);
        CHECK(std::abs(overlap) == doctest::Approx(std::abs(amp(p)) * std::pow(0.5 / E, 0.25)).epsilon(1e-13));
    }
    CHECK(error_kind([&] { chi_from_initial_state(amp, 0.0); }) == ErrorKind::branch);
}

TEST_CASE("tail-completed spectrum matches chi over [-3, 3]")
{
    const Signal s = free_signal();
    SpectrumOptions options;
    options.tail_terms = 2;
    const EnergySpectrum spectrum = energy_spectrum(s, {}, options);
    const MomentumAmplitude amp = MomentumAmplitude::analytic(WellStateSpec{});
    double err = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
        const double E = spectrum.energies[i];
        if (E < -3.0 || E > 3.0 || std::abs(E) < 0.05)
            continue;
        const Complex exact = chi_from_initial_state(amp, E);
        err = std::max(err, std::abs(spectrum.value(i) - exact));
        peak = std::max(peak, std::abs(exact));
    }
    CHECK(err / peak <= 1e-2);
    CHECK(error_kind([&] { spectrum.tail(0.0); }) == ErrorKind::branch);
}

TEST_CASE("energy reconstruction")
{
    const Signal s = free_signal();
    const EnergySpectrum spectrum = energy_spectrum(s);
    const WellStateSpec spec;
    CHECK(relative(reconstruct_energy_domain(spectrum, 0.0, 5.0), s.at(5.0)) < 1e-3);
    CHECK(relative(reconstruct_energy_domain(spectrum, 1.0, 10.0), evolve_free_moshinsky(spec, 1.0, 10.0)) < 1e-2);
    CHECK(std::abs(reconstruct_energy_domain(spectrum, 1.0, -5.0)) <= 1e-3 * s.max_abs());
    CHECK(error_kind([&] { reconstruct_energy_domain(spectrum, -0.5, 1.0); }) == ErrorKind::domain);
    const EnergyReconstruction parts = reconstruct_energy_domain_parts(spectrum, 2.0, 5.0);
    CHECK(std::abs(parts.total() - reconstruct_energy_domain(spectrum, 2.0, 5.0)) < 1e-15);
}

TEST_CASE("K_plus is the scaled spatial derivative of the free kernel")
{
    const double x = 1.0, t = 2.0, tp = 0.0, d = 1e-5;
    const Complex derivative =
        (free_propagator_kernel(x + d, 0.0, t, tp) - free_propagator_kernel(x - d, 0.0, t, tp)) / (2.0 * d);
    CHECK(relative(kernel_K_plus(t, x, tp), derivative / I) < 1e-8);
    CHECK(kernel_K_plus(1.0, 2.0, 3.0) == Complex(0.0));
    CHECK(error_kind([] { kernel_K_plus(1.0, 2.0, 1.0); }) == ErrorKind::singular_kernel);
}

TEST_CASE("step-signal response against brute-force Fresnel quadrature")
{
    const double x = 1.0, beta = 0.5 * x * x;
    const Complex c = std::exp(-I * std::numbers::pi / 4.0) * std::sqrt(1.0 / h) * x;
    double previous = 1.0;
    for (double t : {25.0, 100.0, 400.0}) {
        const Signal ones = constant_signal(1.0, t, 0.05);
        const Complex r = reconstruct_time_domain(ones, x, t);
        CHECK(relative(r, c * fresnel_tail(beta, 1.0 / std::sqrt(t))) < 1e-8);
        CHECK(std::abs(r - 1.0) < previous);
        previous = std::abs(r - 1.0);
    }
    CHECK(previous < 0.05);
}

TEST_CASE("time-domain reconstruction")
{
    const Signal s = free_signal();
    const WellStateSpec spec;
    CHECK(relative(reconstruct_time_domain(s, 2.0, 10.0), evolve_free_moshinsky(spec, 2.0, 10.0)) < 2e-2);
    const EnergySpectrum spectrum = energy_spectrum(s);
    CHECK(relative(reconstruct_time_domain(s, 1.0, 5.0), reconstruct_energy_domain(spectrum, 1.0, 5.0)) < 2e-2);
    CHECK(reconstruct_time_domain(s, 0.0, 7.3) == s.at(7.3));
    CHECK(error_kind([&] { reconstruct_time_domain(s, 1.0, 250.0); }) == ErrorKind::insufficient_record);
    CHECK(error_kind([&] { reconstruct_time_domain(s, -1.0, 2.0); }) == ErrorKind::domain);
}

TEST_CASE("zero signal reconstructs to zero")
{
    const Signal zero = constant_signal(0.0, 20.0, 0.01);
    CHECK(reconstruct_time_domain(zero, 1.5, 10.0) == Complex(0.0));
    CHECK(reconstruct_energy_domain(energy_spectrum(zero), 1.5, 10.0) == Complex(0.0));
}

TEST_CASE("analytic momentum split against the grid split")
{
    const WellStateSpec spec{-2.01, -0.01, 0.5};
    const Grid1D g = Grid1D::make(-60.0, 60.0, 8192);
    const WaveField f = well_ground_state(spec, g);
    const MomentumAmplitude amp = MomentumAmplitude::analytic(spec);
    const MomentumAmplitude sampled = momentum_transform(f);
    for (MomentumSign sign : {MomentumSign::positive, MomentumSign::negative}) {
        const WaveField grid_part = momentum_split(f, sign, 2.0);
        for (std::size_t j : {3890u, 4027u, 4096u, 4164u, 4267u}) {
            const double x = g.x(j);
            CHECK(std::abs(momentum_split(amp, sign, x, 2.0) - grid_part.values[j]) < 1e-3);
            CHECK(std::abs(momentum_split(sampled, sign, x, 2.0) - grid_part.values[j]) < 1e-12);
        }
    }
}

TEST_CASE("source invariants")
{
    require(testing::causality_perturbation());
    require(testing::vanishing_theorem());
    require(testing::evanescent_decay());
    require(testing::momentum_split_partition());
}
