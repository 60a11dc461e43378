#include "checks.hpp"

#include "sourcewave/scattering.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sourcewave;
using testing::error_kind;
using testing::relative;
using testing::require;

namespace {

const double h = 2.0 * std::numbers::pi;

EdgeMonitor no_edges() { return EdgeMonitor{1.0, 0.05, false}; }

} // namespace

TEST_CASE("step transmission values")
{
    const StepSpec spec{5.0};
    const double p0 = std::sqrt(10.0);
    CHECK(spec.p0(1.0) == doctest::Approx(p0));
    CHECK(std::abs(transmission_step(p0, spec) - 2.0) < 1e-15);
    CHECK(std::abs(transmission_step(3.0, spec) - Complex(1.8, -0.6)) < 1e-14);
    CHECK(std::abs(reflection_step(3.0, spec) - Complex(0.8, -0.6)) < 1e-14);
    CHECK(std::abs(transmission_step(1e6, spec) - 1.0) < 1e-10);
    CHECK(std::abs(transmission_step(Complex(0.0, 1e6), spec) - 1.0) < 1e-10);
    CHECK(error_kind([] { transmission_step(0.0, StepSpec{0.0}); }) == ErrorKind::pole);
    CHECK(error_kind([] { validate(StepSpec{-1.0}, "test"); }) == ErrorKind::domain);
}

TEST_CASE("square barrier trivial limits")
{
    for (Complex p : {Complex(0.4, 0.0), Complex(2.0, 0.0), Complex(1.0, 0.5), Complex(0.0, 1.3)}) {
        CHECK(std::abs(transmission_square_barrier(p, BarrierSpec{0.0, -1.0, 0.0}) - 1.0) < 1e-15);
        CHECK(std::abs(transmission_square_barrier(p, BarrierSpec{3.0, -1.0, -1.0}) - 1.0) < 1e-15);
        CHECK(std::abs(reflection_square_barrier(p, BarrierSpec{3.0, -1.0, -1.0})) < 1e-15);
    }
    CHECK(std::abs(transmission_square_barrier(1e-9, BarrierSpec{1.0, -1.0, 0.0})) < 1e-8);
    CHECK(error_kind([] { validate(BarrierSpec{1.0, 0.0, -1.0}, "test"); }) == ErrorKind::geometry);
    CHECK(error_kind([] { validate(BarrierSpec{1.0, -1.0, 0.5}, "test"); }) == ErrorKind::geometry);
}

TEST_CASE("square barrier against stationary integration")
{
    const testing::StationaryAmplitudes rk = testing::integrate_barrier(1.3, BarrierSpec{1.0, -1.0, 0.0});
    CHECK(relative(transmission_square_barrier(1.3, BarrierSpec{1.0, -1.0, 0.0}), rk.transmission) < 1e-10);
    require(testing::barrier_matches_stationary_integration());
    require(testing::barrier_unitarity());
}

TEST_CASE("releveling")
{
    const StepSpec spec{5.0};
    const Complex v(0.3, -0.4);
    CHECK(relevel_to_upper(v, 0.0, spec) == v);
    for (double t : {0.1, 2.0, 17.3})
        CHECK(std::abs(relevel_to_upper(v, t, spec)) == doctest::Approx(std::abs(v)).epsilon(1e-15));

    // the spectrum of a releveled damped tone sits at omega0 - V0
    const double omega0 = 2.0, eta = 0.5;
    const Signal s = relevel_to_upper(monochromatic_signal(omega0, eta, TimeGrid::make(0.0, 1e-3, 100000)), spec);
    const EnergySpectrum spectrum = energy_spectrum(s);
    double worst = 0.0;
    for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
        const double E = spectrum.energies[i];
        if (std::abs(E) > 10.0)
            continue;
        const Complex oracle = std::pow(h, -0.5) * I / (E - (omega0 - spec.V0) + I * eta);
        worst = std::max(worst, relative(spectrum.values[i], oracle));
    }
    // same sampling error as the unshifted tone at dt = 1e-3
    CHECK(worst < 2e-5);
}

TEST_CASE("step relation right-hand side")
{
    const StepSpec spec{5.0};
    const WellStateSpec well{-2.01, -0.01, 1.0};
    const MomentumAmplitude amp = MomentumAmplitude::analytic(well);
    for (double E : {-8.0, -5.5, -2.0, 0.3, 4.0}) {
        const Complex p = p_plus(E + spec.V0, 1.0);
        const Complex direct = 1.0 / p * transmission_step(p, spec) * momentum_amplitude_well(well, p);
        CHECK(relative(step_relation_rhs(amp, E, spec), direct) < 1e-14);
    }
    CHECK(error_kind([&] { step_relation_rhs(amp, -5.0, spec); }) == ErrorKind::branch);
    require(testing::zero_step_matches_free_relation());
    require(testing::step_flux_unitarity());
    require(testing::evanescent_zero_flux());
    require(testing::negative_energy_dominance());
}

TEST_CASE("barrier relation right-hand side")
{
    const MomentumAmplitude amp = MomentumAmplitude::analytic(WellStateSpec{-4.0, -2.0, 1.0});
    const BarrierSpec spec{1.0, -1.5, -0.5};
    for (double E : {-1.0, 0.4, 2.5}) {
        const Complex p = p_plus(E, 1.0);
        const Complex direct = 1.0 / p * transmission_square_barrier(p, spec) * amp(p);
        CHECK(relative(barrier_relation_rhs(amp, E, spec), direct) < 1e-14);
    }
    CHECK(error_kind([&] { barrier_relation_rhs(amp, 1.0, BarrierSpec{-1.0, -1.5, -0.5}); }) ==
          ErrorKind::not_supported);
}

TEST_CASE("arrival probability")
{
    CHECK(std::abs(arrival_probability(MomentumAmplitude::analytic(WellStateSpec{})) - 0.5) < 1e-10);
    const WaveField f = well_ground_state(WellStateSpec{}, Grid1D::make(-60.0, 60.0, 8192));
    // reality symmetry on the grid: exactly half the discrete norm
    CHECK(std::abs(arrival_probability(momentum_transform(f)) - 0.5 * f.norm_squared()) < 1e-12);
    CHECK(std::abs(arrival_probability(momentum_transform(f)) - 0.5) < 1e-6);
    CHECK(right_norm(f, 0.0) == 0.0);
    require(testing::boost_shifts_arrival());
}

TEST_CASE("right norm at t = 400 beyond X = 1")
{
    const WaveField f = well_ground_state(WellStateSpec{}, Grid1D::make(-8192.0, 8192.0, std::size_t{1} << 20));
    const WaveField g = evolve_free_spectral(f, 400.0, {}, no_edges());
    CHECK(std::abs(right_norm(g, 1.0) - 0.5) < 5e-3);
}

TEST_CASE("asymptotic right norm stops once the change is small")
{
    const WaveField f = well_ground_state(WellStateSpec{}, Grid1D::make(-8192.0, 8192.0, std::size_t{1} << 20));
    AsymptoticOptions options;
    options.edges = no_edges();
    const AsymptoticRightNorm r = asymptotic_right_norm(f, 1.0, {}, options);
    CHECK(r.converged);
    REQUIRE(r.history.size() >= 2);
    CHECK(std::abs(r.history.back().right_norm - r.history[r.history.size() - 2].right_norm) < 1e-4);
    CHECK(std::abs(r.value - 0.5) < 5e-3);
}

TEST_CASE("energy overlap")
{
    const Signal s = extract_signal(moshinsky_probe_record(WellStateSpec{}, TimeGrid::spanning(0.0, 200.0, 1e-2)));
    const EnergySpectrum spectrum = energy_spectrum(s);
    for (double E : {-2.0, -0.3}) {
        const Complex ratio = energy_overlap(spectrum, E) / spectrum.at(E);
        CHECK(std::arg(ratio) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
        CHECK(std::abs(ratio) == doctest::Approx(std::pow(2.0 * std::abs(E), 0.25)).epsilon(1e-14));
    }
    CHECK(error_kind([&] { energy_overlap(spectrum, 0.0); }) == ErrorKind::branch);
    CHECK(std::abs(energy_side_arrival(spectrum) - 0.5) < 1e-2);
    CHECK(negative_energy_fraction(spectrum) > 0.0);
    CHECK(negative_energy_fraction(spectrum) < 1.0);
}
