#pragma once

#include "sourcewave/numerics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace sourcewave {

/// Uniform periodic grid x_j = x_min + j dx, j = 0..n-1, dx = (x_max - x_min)/n.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n = 0;

    /// Validated construction: x_min < x_max, n a power of two, n >= 2.
    static Grid1D make(double x_min, double x_max, std::size_t n);

    double length() const noexcept { return x_max - x_min; }
    double dx() const noexcept { return length() / static_cast<double>(n); }
    double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx(); }

    /// Index of the node sitting at `position` (within 1e-9 dx), if any.
    std::optional<std::size_t> node_at(double position) const noexcept;

    /// Momentum of DFT bin k, p = 2 pi hbar * signed_bin(k) / L.
    double momentum(std::size_t k, double hbar) const noexcept;
    double momentum_spacing(double hbar) const noexcept;
    double nyquist_momentum(double hbar) const noexcept;
};

void validate(const Grid1D& grid, std::string_view operation);

/// Wave function sampled on a grid at one instant.
struct WaveField {
    Grid1D grid;
    std::vector<Complex> values;
    double time = 0.0;

    /// sum |psi|^2 dx
    double norm_squared() const;
    double peak_density() const;
    std::vector<double> density() const;
};

/// Ground state of an infinite well on [a, b], optionally boosted by
/// exp(i p_avg x / hbar).
struct WellStateSpec {
    double a = -2.01;
    double b = -0.01;
    double p_avg = 0.0;

    double width() const noexcept { return b - a; }
    double k_w() const noexcept;
    double p_w(double hbar) const noexcept { return hbar * k_w(); }
};

/// Minimum-uncertainty Gaussian; delta_x is the position standard deviation.
struct GaussianStateSpec {
    double x0 = -3.0;
    double p_avg = 1.0;
    double delta_x = 0.5;
};

using StateSpec = std::variant<WellStateSpec, GaussianStateSpec>;

void validate(const WellStateSpec& spec, std::string_view operation);
void validate(const GaussianStateSpec& spec, std::string_view operation);

/// Momentum-space amplitude psi~(p) = h^{-1/2} int dx exp(-ipx/hbar) psi(x).
///
/// The analytic kind carries a state descriptor and is evaluable anywhere in
/// the complex p plane. The sampled kind holds values on an ascending uniform
/// real grid and answers only at its own nodes.
class MomentumAmplitude {
public:
    static MomentumAmplitude analytic(StateSpec state, PhysicalConstants consts = {});
    static MomentumAmplitude sampled(std::vector<double> momenta, std::vector<Complex> values,
                                     PhysicalConstants consts = {});

    bool is_analytic() const noexcept { return state_.has_value(); }
    const PhysicalConstants& constants() const noexcept { return consts_; }
    const StateSpec& state() const;

    std::span<const double> momenta() const noexcept { return momenta_; }
    std::span<const Complex> values() const noexcept { return values_; }
    double momentum_spacing() const;
    /// Weight of sample k in a sum over positive (sign > 0) or negative
    /// momenta: 1 or 0, and 1/2 at p = 0 and at the unpaired -p_nyquist bin
    /// of a DFT grid.
    double half_line_weight(std::size_t k, int sign) const;

    Complex operator()(Complex p) const;

private:
    MomentumAmplitude() = default;

    std::optional<StateSpec> state_;
    std::vector<double> momenta_;
    std::vector<Complex> values_;
    PhysicalConstants consts_;
};

WaveField well_ground_state(const WellStateSpec& spec, const Grid1D& grid,
                            const PhysicalConstants& consts = {});
WaveField gaussian_state(const GaussianStateSpec& spec, const Grid1D& grid,
                         const PhysicalConstants& consts = {});
WaveField make_initial_state(const StateSpec& spec, const Grid1D& grid,
                             const PhysicalConstants& consts = {});

/// Closed-form amplitude of the (boosted) well ground state at complex p.
/// The removable singularities at p - p_avg = -+p_w are evaluated through the
/// sinc form of each truncated plane wave.
Complex momentum_amplitude_well(const WellStateSpec& spec, Complex p,
                                const PhysicalConstants& consts = {});
Complex momentum_amplitude_gaussian(const GaussianStateSpec& spec, Complex p,
                                    const PhysicalConstants& consts = {});
Complex momentum_amplitude(const StateSpec& spec, Complex p, const PhysicalConstants& consts = {});

/// Discrete transform of a grid field onto p_k = 2 pi hbar k / L,
/// k in [-n/2, n/2), ascending. Parseval holds exactly.
MomentumAmplitude momentum_transform(const WaveField& field, const PhysicalConstants& consts = {});

double expectation_x(const WaveField& field);
double spread_x(const WaveField& field);
double expectation_p(const WaveField& field, const PhysicalConstants& consts = {});
double spread_p(const WaveField& field, const PhysicalConstants& consts = {});

/// int_{x >= threshold} |psi|^2 dx with the straddling cell split linearly.
double norm_beyond(const WaveField& field, double threshold);

} // namespace sourcewave
