#include "sourcewave/states.hpp"

#include "sourcewave/errors.hpp"
#include "sourcewave/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace sourcewave {

namespace {

// (exp(-i eps b) - exp(-i eps a)) / eps, finite through eps = 0.
Complex truncated_wave_integral(Complex eps, double a, double b)
{
    const double width = b - a;
    const Complex half_arg = 0.5 * eps * width;
    if (std::abs(half_arg) < 0.5) {
        const Complex z2 = half_arg * half_arg;
        Complex sinc;
        if (std::abs(half_arg) < 1e-4)
            sinc = 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
        else
            sinc = std::sin(half_arg) / half_arg;
        return -I * width * std::exp(-I * eps * (0.5 * (a + b))) * sinc;
    }
    return (std::exp(-I * eps * b) - std::exp(-I * eps * a)) / eps;
}

} // namespace

Grid1D Grid1D::make(double x_min, double x_max, std::size_t n)
{
    Grid1D grid{x_min, x_max, n};
    validate(grid, "Grid1D::make");
    return grid;
}

void validate(const Grid1D& grid, std::string_view operation)
{
    if (!std::isfinite(grid.x_min) || !std::isfinite(grid.x_max) || !(grid.x_min < grid.x_max))
        fail(ErrorKind::geometry, std::string(operation), "grid requires finite x_min < x_max");
    if (grid.n < 2 || !std::has_single_bit(grid.n))
        fail(ErrorKind::geometry, std::string(operation), "grid size must be a power of two >= 2");
}

std::optional<std::size_t> Grid1D::node_at(double position) const noexcept
{
    const double s = (position - x_min) / dx();
    const double j = std::round(s);
    if (j < 0.0 || j >= static_cast<double>(n) || std::abs(s - j) > 1e-9)
        return std::nullopt;
    return static_cast<std::size_t>(j);
}

double Grid1D::momentum(std::size_t k, double hbar) const noexcept
{
    return momentum_spacing(hbar) * static_cast<double>(signed_bin(k, n));
}

double Grid1D::momentum_spacing(double hbar) const noexcept
{
    return 2.0 * std::numbers::pi * hbar / length();
}

double Grid1D::nyquist_momentum(double hbar) const noexcept
{
    return std::numbers::pi * hbar / dx();
}

double WaveField::norm_squared() const
{
    double sum = 0.0;
    for (const Complex& v : values)
        sum += std::norm(v);
    return sum * grid.dx();
}

double WaveField::peak_density() const
{
    double peak = 0.0;
    for (const Complex& v : values)
        peak = std::max(peak, std::norm(v));
    return peak;
}

std::vector<double> WaveField::density() const
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](const Complex& v) { return std::norm(v); });
    return out;
}

double WellStateSpec::k_w() const noexcept { return std::numbers::pi / width(); }

void validate(const WellStateSpec& spec, std::string_view operation)
{
    if (!std::isfinite(spec.a) || !std::isfinite(spec.b) || !std::isfinite(spec.p_avg))
        fail(ErrorKind::domain, std::string(operation), "well parameters must be finite");
    if (!(spec.a < spec.b) || spec.b > 0.0)
        fail(ErrorKind::geometry, std::string(operation), "well requires a < b <= 0");
}

void validate(const GaussianStateSpec& spec, std::string_view operation)
{
    if (!std::isfinite(spec.x0) || !std::isfinite(spec.p_avg) || !(spec.delta_x > 0.0) ||
        !std::isfinite(spec.delta_x))
        fail(ErrorKind::domain, std::string(operation), "Gaussian needs finite x0, p_avg and delta_x > 0");
}

MomentumAmplitude MomentumAmplitude::analytic(StateSpec state, PhysicalConstants consts)
{
    validate(consts, "MomentumAmplitude::analytic");
    std::visit([](const auto& s) { validate(s, "MomentumAmplitude::analytic"); }, state);
    MomentumAmplitude amp;
    amp.state_ = std::move(state);
    amp.consts_ = consts;
    return amp;
}

MomentumAmplitude MomentumAmplitude::sampled(std::vector<double> momenta, std::vector<Complex> values,
                                             PhysicalConstants consts)
{
    validate(consts, "MomentumAmplitude::sampled");
    if (momenta.size() != values.size() || momenta.size() < 2)
        fail(ErrorKind::configuration, "MomentumAmplitude::sampled",
             "momenta and values must have equal length >= 2");
    const double dp = momenta[1] - momenta[0];
    if (!(dp > 0.0))
        fail(ErrorKind::configuration, "MomentumAmplitude::sampled", "momenta must ascend");
    for (std::size_t k = 1; k < momenta.size(); ++k) {
        if (std::abs((momenta[k] - momenta[k - 1]) - dp) > 1e-9 * dp)
            fail(ErrorKind::configuration, "MomentumAmplitude::sampled", "momenta must be uniform");
    }
    MomentumAmplitude amp;
    amp.momenta_ = std::move(momenta);
    amp.values_ = std::move(values);
    amp.consts_ = consts;
    return amp;
}

const StateSpec& MomentumAmplitude::state() const
{
    if (!state_)
        fail(ErrorKind::configuration, "MomentumAmplitude::state", "sampled amplitude has no state descriptor");
    return *state_;
}

double MomentumAmplitude::momentum_spacing() const
{
    if (momenta_.size() < 2)
        fail(ErrorKind::configuration, "MomentumAmplitude::momentum_spacing", "analytic amplitude has no grid");
    return momenta_[1] - momenta_[0];
}

double MomentumAmplitude::half_line_weight(std::size_t k, int sign) const
{
    const double p = momenta_.at(k);
    const double dp = momentum_spacing();
    const bool nyquist = k == 0 && std::abs(momenta_.front() + momenta_.back() + dp) < 1e-9 * dp;
    if (p == 0.0 || nyquist)
        return 0.5;
    return (p > 0.0) == (sign > 0) ? 1.0 : 0.0;
}

Complex MomentumAmplitude::operator()(Complex p) const
{
    if (state_)
        return momentum_amplitude(*state_, p, consts_);
    require_finite(p, "MomentumAmplitude");
    const double dp = momentum_spacing();
    const double s = (p.real() - momenta_.front()) / dp;
    const double k = std::round(s);
    if (p.imag() != 0.0 || k < 0.0 || k >= static_cast<double>(momenta_.size()) || std::abs(s - k) > 1e-6)
        fail(ErrorKind::configuration, "MomentumAmplitude",
             "sampled amplitude is only defined at its real grid momenta");
    return values_[static_cast<std::size_t>(k)];
}

WaveField well_ground_state(const WellStateSpec& spec, const Grid1D& grid, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "well_ground_state";
    validate(spec, op);
    validate(grid, op);
    validate(consts, op);
    if (spec.a < grid.x_min || spec.b > grid.x_max)
        fail(ErrorKind::geometry, std::string(op), "well [a, b] lies outside the grid");
    if (spec.width() / grid.dx() < 32.0)
        fail(ErrorKind::geometry, std::string(op), "grid resolves the well with fewer than 32 points");

    WaveField field{grid, std::vector<Complex>(grid.n), 0.0};
    const double amplitude = std::sqrt(2.0 / spec.width());
    const double k = spec.k_w();
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        if (x > spec.a && x < spec.b)
            field.values[j] = amplitude * std::sin((x - spec.a) * k) *
                              std::exp(I * (spec.p_avg * x / consts.hbar));
    }
    return field;
}

WaveField gaussian_state(const GaussianStateSpec& spec, const Grid1D& grid, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "gaussian_state";
    validate(spec, op);
    validate(grid, op);
    validate(consts, op);
    const double sigma2 = spec.delta_x * spec.delta_x;
    // |psi(edge)| / |psi(peak)| = exp(-(edge - x0)^2 / (4 sigma^2))
    const double edge_distance = std::min(spec.x0 - grid.x_min, grid.x_max - spec.x0);
    if (edge_distance <= 0.0 || edge_distance * edge_distance / (4.0 * sigma2) < -std::log(1e-12))
        fail(ErrorKind::geometry, std::string(op), "Gaussian tail at the grid edge exceeds 1e-12 of the peak");

    WaveField field{grid, std::vector<Complex>(grid.n), 0.0};
    const double norm = std::pow(2.0 * std::numbers::pi * sigma2, -0.25);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        const double d = x - spec.x0;
        field.values[j] = norm * std::exp(Complex{-d * d / (4.0 * sigma2), spec.p_avg * x / consts.hbar});
    }
    return field;
}

WaveField make_initial_state(const StateSpec& spec, const Grid1D& grid, const PhysicalConstants& consts)
{
    return std::visit(
        [&](const auto& s) -> WaveField {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WellStateSpec>)
                return well_ground_state(s, grid, consts);
            else
                return gaussian_state(s, grid, consts);
        },
        spec);
}

Complex momentum_amplitude_well(const WellStateSpec& spec, Complex p, const PhysicalConstants& consts)
{
    require_finite(p, "momentum_amplitude_well");
    const double hbar = consts.hbar;
    const double pw = spec.p_w(hbar);
    const Complex p_rel = p - spec.p_avg;
    Complex sum{0.0, 0.0};
    for (const double alpha : {1.0, -1.0}) {
        const Complex eps = (p_rel + alpha * pw) / hbar;
        sum += alpha * truncated_wave_integral(eps, spec.a, spec.b) *
               std::exp(I * (alpha * pw * spec.a / hbar));
    }
    // the closed form's 1/(p + alpha p_w) equals (1/hbar) / eps
    const double prefactor = -std::sqrt(2.0 * consts.planck()) / (4.0 * std::numbers::pi * std::sqrt(spec.width()));
    return prefactor * sum / hbar;
}

Complex momentum_amplitude_gaussian(const GaussianStateSpec& spec, Complex p, const PhysicalConstants& consts)
{
    require_finite(p, "momentum_amplitude_gaussian");
    const double sigma = spec.delta_x;
    const Complex k = (p - spec.p_avg) / consts.hbar;
    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) * 2.0 * sigma *
                        std::sqrt(std::numbers::pi) / std::sqrt(consts.planck());
    const Complex value = norm * std::exp(-I * k * spec.x0 - k * k * (sigma * sigma));
    require_finite(value, "momentum_amplitude_gaussian");
    return value;
}

Complex momentum_amplitude(const StateSpec& spec, Complex p, const PhysicalConstants& consts)
{
    return std::visit(
        [&](const auto& s) -> Complex {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WellStateSpec>)
                return momentum_amplitude_well(s, p, consts);
            else
                return momentum_amplitude_gaussian(s, p, consts);
        },
        spec);
}

MomentumAmplitude momentum_transform(const WaveField& field, const PhysicalConstants& consts)
{
    validate(field.grid, "momentum_transform");
    const Grid1D& grid = field.grid;
    const std::size_t n = grid.n;
    if (field.values.size() != n)
        fail(ErrorKind::configuration, "momentum_transform", "field length does not match its grid");

    std::vector<Complex> work = field.values;
    Fft(n).forward(work);

    const double scale = grid.dx() / std::sqrt(consts.planck());
    std::vector<double> momenta(n);
    std::vector<Complex> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t slot = (k + n / 2) % n; // ascending order, bin -n/2 first
        const double p = grid.momentum(k, consts.hbar);
        momenta[slot] = p;
        values[slot] = scale * std::exp(-I * (p * grid.x_min / consts.hbar)) * work[k];
    }
    return MomentumAmplitude::sampled(std::move(momenta), std::move(values), consts);
}

double expectation_x(const WaveField& field)
{
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < field.values.size(); ++j) {
        const double rho = std::norm(field.values[j]);
        num += field.grid.x(j) * rho;
        den += rho;
    }
    return num / den;
}

double spread_x(const WaveField& field)
{
    const double mean = expectation_x(field);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < field.values.size(); ++j) {
        const double rho = std::norm(field.values[j]);
        const double d = field.grid.x(j) - mean;
        num += d * d * rho;
        den += rho;
    }
    return std::sqrt(num / den);
}

namespace {

std::pair<double, double> momentum_moments(const WaveField& field, const PhysicalConstants& consts)
{
    const MomentumAmplitude amp = momentum_transform(field, consts);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < amp.values().size(); ++k) {
        const double rho = std::norm(amp.values()[k]);
        const double p = amp.momenta()[k];
        m0 += rho;
        m1 += p * rho;
        m2 += p * p * rho;
    }
    const double mean = m1 / m0;
    return {mean, std::sqrt(std::max(0.0, m2 / m0 - mean * mean))};
}

} // namespace

double expectation_p(const WaveField& field, const PhysicalConstants& consts)
{
    return momentum_moments(field, consts).first;
}

double spread_p(const WaveField& field, const PhysicalConstants& consts)
{
    return momentum_moments(field, consts).second;
}

double norm_beyond(const WaveField& field, double threshold)
{
    const Grid1D& grid = field.grid;
    const double dx = grid.dx();
    double sum = 0.0;
    for (std::size_t j = 0; j < field.values.size(); ++j) {
        const double lo = grid.x(j) - 0.5 * dx;
        const double hi = lo + dx;
        if (hi <= threshold)
            continue;
        const double covered = lo >= threshold ? dx : hi - threshold;
        sum += std::norm(field.values[j]) * covered;
    }
    return sum;
}

} // namespace sourcewave
