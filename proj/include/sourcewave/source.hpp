#pragma once

#include "sourcewave/propagation.hpp"
#include "sourcewave/signal.hpp"
#include "sourcewave/states.hpp"

#include <cstddef>
#include <vector>

namespace sourcewave {

/// chi(E) on an ascending uniform energy grid covering [-pi hbar/dt, pi hbar/dt).
struct EnergySpectrum {
    std::vector<double> energies;
    std::vector<Complex> values;
    double record_length = 0.0;
    double dt = 0.0;
    double hbar = 1.0;
    /// Fitted c_k of psi(0, t) ~ sum_k c_k t^{-k-1/2} beyond the record; empty unless requested.
    std::vector<Complex> tail_coefficients;

    double energy_spacing() const noexcept { return energies[1] - energies[0]; }
    /// Sampled value plus the analytic tail contribution.
    Complex value(std::size_t i) const;
    /// Six-point Lagrange interpolation of the sampled part plus the tail; zero outside the grid.
    Complex at(double energy) const;
    /// h^{-1/2} int_T^inf dt sum_k c_k t^{-k-1/2} exp(iEt/hbar); zero without a tail fit.
    Complex tail(double energy) const;
};

struct SpectrumOptions {
    /// Zero-padding factor; the transform length is the next power of two >= pad * samples.
    std::size_t pad = 8;
    /// Optional damping: the signal is multiplied by exp(-damping t / hbar).
    double damping = 0.0;
    /// Number of inverse half-integer powers fitted to the last half of the
    /// record and integrated analytically past its end. Suited to free
    /// signals, whose long-time decay is a pure power series.
    std::size_t tail_terms = 0;
};

/// The probe series of an evolution record, gated at t = 0.
Signal extract_signal(const EvolutionRecord& record);

/// chi(E) = h^{-1/2} int_0^T dt psi(0, t) exp(iEt/hbar) by trapezoid weights
/// and a zero-padded FFT.
EnergySpectrum energy_spectrum(const Signal& signal, const PhysicalConstants& consts = {},
                               const SpectrumOptions& options = {});

/// chi(E) = (m/p) psi~(p), p = p_plus(E); positive imaginary p for E < 0.
Complex chi_from_initial_state(const MomentumAmplitude& amp, double energy, const PhysicalConstants& consts = {});

struct EnergyReconstruction {
    Complex negative; // E < 0, evanescent in x
    Complex positive; // E >= 0
    Complex total() const noexcept { return negative + positive; }
};

struct EnergyQuadrature {
    /// Bins within core_bins * dE of E = 0 are integrated with E = +-u^2.
    std::size_t core_bins = 8;
    std::size_t core_order = 40;
};

/// psi(x, t) = h^{-1/2} int dE exp(i x p_+(E)/hbar - iEt/hbar) chi(E), x >= 0.
Complex reconstruct_energy_domain(const EnergySpectrum& spectrum, double x, double t,
                                  const PhysicalConstants& consts = {}, const EnergyQuadrature& quad = {});
EnergyReconstruction reconstruct_energy_domain_parts(const EnergySpectrum& spectrum, double x, double t,
                                                     const PhysicalConstants& consts = {},
                                                     const EnergyQuadrature& quad = {});

/// K_+(t, x; t') = [m / (ih (t - t')^3)]^{1/2} x exp(imx^2 / 2 hbar (t - t')), zero for t < t'.
Complex kernel_K_plus(double t, double x, double t_prime, const PhysicalConstants& consts = {});

/// psi(x, t) = int_0^t dt' K_+(t, x; t') psi(0, t') by product integration of
/// the exact kernel against the piecewise linear signal.
Complex reconstruct_time_domain(const Signal& signal, double x, double t, const PhysicalConstants& consts = {});

enum class MomentumSign { positive, negative };

struct SplitQuadrature {
    double p_max = 80.0;
    std::size_t order = 16;
    double max_panel = 0.25;
};

/// psi_{f,+-}(x, t) = h^{-1/2} int dp Theta(+-p) exp(ipx/hbar - ip^2 t / 2m hbar) psi~(p).
/// Sampled amplitudes are summed over their nodes with p = 0 shared equally;
/// analytic amplitudes use Gauss-Legendre panels on [0, +-p_max].
Complex momentum_split(const MomentumAmplitude& amp, MomentumSign sign, double x, double t,
                       const SplitQuadrature& quad = {});

/// Grid version: the p = 0 and Nyquist bins are shared equally between signs.
WaveField momentum_split(const WaveField& field, MomentumSign sign, double t, const PhysicalConstants& consts = {});

} // namespace sourcewave
