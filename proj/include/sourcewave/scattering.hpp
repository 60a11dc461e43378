#pragma once

#include "sourcewave/propagation.hpp"
#include "sourcewave/source.hpp"
#include "sourcewave/states.hpp"

#include <vector>

namespace sourcewave {

/// Step of height V0 >= 0 at x = 0; p0 = (2 m V0)^{1/2}.
struct StepSpec {
    double V0 = 5.0;

    double p0(double mass) const noexcept;
};

/// Rectangular barrier (V0 > 0) or well (V0 < 0) on [c, d], c <= d <= 0.
struct BarrierSpec {
    double V0 = 1.0;
    double c = -1.0;
    double d = 0.0;

    double width() const noexcept { return d - c; }
};

void validate(const StepSpec& spec, std::string_view operation);
void validate(const BarrierSpec& spec, std::string_view operation);

/// Left-incidence amplitudes 2p/(p+q) and (p-q)/(p+q), q = q_of_p(p, p0).
Complex transmission_step(Complex p, const StepSpec& spec, const PhysicalConstants& consts = {});
Complex reflection_step(Complex p, const StepSpec& spec, const PhysicalConstants& consts = {});

/// Transfer-matrix amplitudes. Written through cos(kappa w) and
/// sin(kappa w)/kappa, both even in kappa, so no interior branch is chosen.
Complex transmission_square_barrier(Complex p, const BarrierSpec& spec, const PhysicalConstants& consts = {});
Complex reflection_square_barrier(Complex p, const BarrierSpec& spec, const PhysicalConstants& consts = {});

/// psi' = exp(i V0 t / hbar) psi: energies measured from the upper level.
Complex relevel_to_upper(Complex value, double t, const StepSpec& spec, const PhysicalConstants& consts = {});
Signal relevel_to_upper(const Signal& signal, const StepSpec& spec, const PhysicalConstants& consts = {});

/// (m/p) T^l(p) psi~(p) with p = p_plus(E' + V0).
Complex step_relation_rhs(const MomentumAmplitude& amp, double energy_upper, const StepSpec& spec);

/// (m/p) T(p) psi~(p) with p = p_plus(E) for a barrier to the left of the probe.
/// Attractive wells can bind, so they are rejected.
Complex barrier_relation_rhs(const MomentumAmplitude& amp, double energy, const BarrierSpec& spec);

/// int_0^inf |psi~(p)|^2 dp
double arrival_probability(const MomentumAmplitude& amp);

/// int_X^inf |psi(x, t)|^2 dx
double right_norm(const WaveField& field, double X);

struct RightNormSample {
    double time = 0.0;
    double right_norm = 0.0;
};

struct AsymptoticRightNorm {
    double time = 0.0;
    double value = 0.0;
    bool converged = false;
    std::vector<RightNormSample> history;
};

struct AsymptoticOptions {
    double interval = 50.0;
    double tolerance = 1e-4;
    double t_max = 2000.0;
    EdgeMonitor edges{1e-3, 0.05, true};
};

/// Free evolution sampled every `interval` until the right norm changes by
/// less than `tolerance` between samples.
AsymptoticRightNorm asymptotic_right_norm(const WaveField& initial, double X, const PhysicalConstants& consts = {},
                                          const AsymptoticOptions& options = {});

/// <E|psi_s> = chi(E) (2E/m)^{1/4}, fourth root cut along the negative imaginary E axis.
Complex energy_overlap(const EnergySpectrum& spectrum, double energy, const PhysicalConstants& consts = {});

/// int_0^inf |<E|psi_s>|^2 dE over the sampled spectrum.
double energy_side_arrival(const EnergySpectrum& spectrum, const PhysicalConstants& consts = {});

/// int_-inf^inf |<E|psi_s>|^2 dE; a diagnostic number, not a probability.
double energy_overlap_total(const EnergySpectrum& spectrum, const PhysicalConstants& consts = {});

/// Fraction of int |chi|^2 dE carried by E < 0.
double negative_energy_fraction(const EnergySpectrum& spectrum);

} // namespace sourcewave
