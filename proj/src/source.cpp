#include "sourcewave/source.hpp"

#include "sourcewave/errors.hpp"
#include "sourcewave/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <variant>

namespace sourcewave {

namespace {

Complex unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

// exp(i x p_+(E) / hbar) for real E
Complex spatial_factor(double energy, double x, const PhysicalConstants& c)
{
    const double p = std::sqrt(2.0 * c.mass * std::abs(energy));
    if (energy >= 0.0)
        return unit_phase(x * p / c.hbar);
    return {std::exp(-x * p / c.hbar), 0.0};
}

// int_0^tau s^{-3/2} exp(i beta / s) ds
Complex shutter_moment0(double tau, double beta)
{
    if (tau <= 0.0)
        return {0.0, 0.0};
    const Complex rot = std::polar(1.0, 0.25 * std::numbers::pi);
    const Complex z = rot * std::sqrt(beta / tau);
    return std::sqrt(std::numbers::pi / beta) * rot * unit_phase(beta / tau) * faddeeva_w(z);
}

// int_0^tau s^{-1/2} exp(i beta / s) ds, given the matching moment0
Complex shutter_moment1(double tau, double beta, Complex moment0)
{
    if (tau <= 0.0)
        return {0.0, 0.0};
    return 2.0 * std::sqrt(tau) * unit_phase(beta / tau) + 2.0 * I * beta * moment0;
}

double state_extent(const StateSpec& state)
{
    if (const auto* well = std::get_if<WellStateSpec>(&state))
        return std::max(std::abs(well->a), std::abs(well->b));
    const auto& g = std::get<GaussianStateSpec>(state);
    return std::abs(g.x0) + 8.0 * g.delta_x;
}

// Least-squares c_k in psi(t) ~ sum_k c_k t^{-k-1/2} over the last half of the record.
std::vector<Complex> fit_tail(const Signal& signal, std::size_t terms)
{
    const std::size_t n = signal.values.size();
    const double T = signal.record_length();
    std::vector<Complex> normal(terms * terms, Complex{0.0, 0.0});
    std::vector<Complex> rhs(terms, Complex{0.0, 0.0});
    std::vector<double> basis(terms);
    for (std::size_t j = n / 2; j < n; ++j) {
        const double s = signal.tgrid.time(j) / T;
        for (std::size_t k = 0; k < terms; ++k)
            basis[k] = std::pow(s, -static_cast<double>(k) - 0.5);
        for (std::size_t r = 0; r < terms; ++r) {
            rhs[r] += basis[r] * signal.values[j];
            for (std::size_t c = 0; c < terms; ++c)
                normal[r * terms + c] += basis[r] * basis[c];
        }
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < terms; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < terms; ++r) {
            if (std::abs(normal[r * terms + col]) > std::abs(normal[pivot * terms + col]))
                pivot = r;
        }
        for (std::size_t c = 0; c < terms; ++c)
            std::swap(normal[col * terms + c], normal[pivot * terms + c]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < terms; ++r) {
            const Complex f = normal[r * terms + col] / normal[col * terms + col];
            for (std::size_t c = col; c < terms; ++c)
                normal[r * terms + c] -= f * normal[col * terms + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Complex> coef(terms);
    for (std::size_t r = terms; r-- > 0;) {
        Complex acc = rhs[r];
        for (std::size_t c = r + 1; c < terms; ++c)
            acc -= normal[r * terms + c] * coef[c];
        coef[r] = acc / normal[r * terms + r];
    }
    // undo the t/T scaling of the basis
    for (std::size_t k = 0; k < terms; ++k)
        coef[k] *= std::pow(T, static_cast<double>(k) + 0.5);
    return coef;
}

} // namespace

Complex EnergySpectrum::tail(double energy) const
{
    if (tail_coefficients.empty())
        return {0.0, 0.0};
    if (energy == 0.0)
        fail(ErrorKind::branch, "EnergySpectrum::tail", "the completed spectrum diverges at E = 0");
    const double T = record_length;
    const double eps = energy / hbar;
    const Complex a = std::sqrt(Complex{0.0, -eps});
    const Complex edge = std::polar(1.0, eps * T);
    // J_0 = int_T^inf t^{-1/2} e^{i eps t} dt, then J_{k+1} = (T^{-k-1/2} e^{i eps T} + i eps J_k) / (k + 1/2)
    Complex J = std::sqrt(std::numbers::pi) / a * edge * faddeeva_w(I * a * std::sqrt(T));
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < tail_coefficients.size(); ++k) {
        sum += tail_coefficients[k] * J;
        const double order = static_cast<double>(k) + 0.5;
        J = (std::pow(T, -order) * edge + I * eps * J) / order;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * hbar);
}

Complex EnergySpectrum::value(std::size_t i) const
{
    return tail_coefficients.empty() ? values[i] : values[i] + tail(energies[i]);
}

Complex EnergySpectrum::at(double energy) const
{
    const std::size_t n = energies.size();
    if (n < 6 || energy < energies.front() || energy > energies.back())
        return {0.0, 0.0};
    const double dE = energy_spacing();
    const double s = (energy - energies.front()) / dE;
    const auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - 2;
    const auto start = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(n - 6)));
    Complex sum{0.0, 0.0};
    for (std::size_t i = start; i < start + 6; ++i) {
        double weight = 1.0;
        const double si = static_cast<double>(i);
        for (std::size_t k = start; k < start + 6; ++k) {
            if (k != i)
                weight *= (s - static_cast<double>(k)) / (si - static_cast<double>(k));
        }
        sum += weight * values[i];
    }
    return sum + tail(energy);
}

Signal extract_signal(const EvolutionRecord& record)
{
    if (!record.probe)
        fail(ErrorKind::configuration, "extract_signal", "evolution record carries no probe");
    Signal signal = *record.probe;
    if (signal.probe_x != 0.0)
        fail(ErrorKind::configuration, "extract_signal", "the source probe must sit at x = 0");
    signal.gated = true;
    return signal;
}

EnergySpectrum energy_spectrum(const Signal& signal, const PhysicalConstants& consts, const SpectrumOptions& options)
{
    constexpr std::string_view op = "energy_spectrum";
    validate(consts, op);
    validate(signal.tgrid, op);
    if (!signal.gated || signal.tgrid.t0 != 0.0)
        fail(ErrorKind::configuration, std::string(op), "signal must be gated at t0 = 0");
    if (signal.values.size() != signal.tgrid.samples() || signal.values.size() < 2)
        fail(ErrorKind::configuration, std::string(op), "signal length does not match its time grid");
    if (options.pad < 1 || !(options.damping >= 0.0))
        fail(ErrorKind::configuration, std::string(op), "pad must be >= 1 and damping >= 0");
    if (options.tail_terms > 0 && (options.damping > 0.0 || options.tail_terms > 6 || signal.values.size() < 16))
        fail(ErrorKind::configuration, std::string(op),
             "tail completion needs an undamped record and at most six terms");

    const std::size_t samples = signal.values.size();
    const std::size_t m = std::bit_ceil(options.pad * samples);
    const double dt = signal.tgrid.dt;
    std::vector<Complex> work(m, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < samples; ++j) {
        const double weight = (j == 0 || j + 1 == samples) ? 0.5 : 1.0;
        const double t = signal.tgrid.time(j);
        work[j] = weight * std::exp(-options.damping * t / consts.hbar) * signal.values[j];
    }
    Fft(m).backward(work);

    EnergySpectrum spectrum;
    spectrum.energies.resize(m);
    spectrum.values.resize(m);
    spectrum.record_length = signal.record_length();
    spectrum.dt = dt;
    spectrum.hbar = consts.hbar;
    if (options.tail_terms > 0)
        spectrum.tail_coefficients = fit_tail(signal, options.tail_terms);
    const double dE = consts.planck() / (static_cast<double>(m) * dt);
    const double scale = dt / std::sqrt(consts.planck());
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t slot = (k + m / 2) % m;
        spectrum.energies[slot] = dE * static_cast<double>(signed_bin(k, m));
        spectrum.values[slot] = scale * work[k];
    }
    return spectrum;
}

Complex chi_from_initial_state(const MomentumAmplitude& amp, double energy, const PhysicalConstants& consts)
{
    require_finite(energy, "chi_from_initial_state");
    if (energy == 0.0)
        fail(ErrorKind::branch, "chi_from_initial_state", "E = 0 is the branch point of p_+");
    const Complex p = p_plus(energy, consts.mass);
    return consts.mass / p * amp(p);
}

EnergyReconstruction reconstruct_energy_domain_parts(const EnergySpectrum& spectrum, double x, double t,
                                                     const PhysicalConstants& consts, const EnergyQuadrature& quad)
{
    constexpr std::string_view op = "reconstruct_energy_domain";
    validate(consts, op);
    require_finite(x, op);
    require_finite(t, op);
    if (x < 0.0)
        fail(ErrorKind::domain, std::string(op), "the source solution holds only for x >= 0");
    const std::size_t m = spectrum.energies.size();
    if (m < 16 || spectrum.values.size() != m)
        fail(ErrorKind::configuration, std::string(op), "spectrum too short");

    const double dE = spectrum.energy_spacing();
    const auto zero = static_cast<std::ptrdiff_t>(m / 2);
    const auto core = static_cast<std::ptrdiff_t>(quad.core_bins);
    auto integrand = [&](double energy, Complex chi) {
        return spatial_factor(energy, x, consts) * unit_phase(-energy * t / consts.hbar) * chi;
    };

    EnergyReconstruction out;
    const auto last = static_cast<std::ptrdiff_t>(m) - 1;
    for (std::ptrdiff_t i = 0; i <= last; ++i) {
        const std::ptrdiff_t k = i - zero;
        if (k > -core && k < core)
            continue;
        const double weight = (k == core || k == -core || i == 0 || i == last) ? 0.5 : 1.0;
        const auto idx = static_cast<std::size_t>(i);
        const Complex term = weight * integrand(spectrum.energies[idx], spectrum.value(idx));
        (k < 0 ? out.negative : out.positive) += term;
    }
    out.negative *= dE;
    out.positive *= dE;

    // E = +-u^2 removes the inverse square root behaviour at the branch point.
    const QuadratureRule& rule = gauss_legendre(quad.core_order);
    const double u_max = std::sqrt(static_cast<double>(quad.core_bins) * dE);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = 0.5 * u_max * (1.0 + rule.nodes[q]);
        const double jac = 0.5 * u_max * rule.weights[q] * 2.0 * u;
        const double e = u * u;
        out.positive += jac * integrand(e, spectrum.at(e));
        out.negative += jac * integrand(-e, spectrum.at(-e));
    }
    const double norm = 1.0 / std::sqrt(consts.planck());
    out.negative *= norm;
    out.positive *= norm;
    return out;
}

Complex reconstruct_energy_domain(const EnergySpectrum& spectrum, double x, double t, const PhysicalConstants& consts,
                                  const EnergyQuadrature& quad)
{
    return reconstruct_energy_domain_parts(spectrum, x, t, consts, quad).total();
}

Complex kernel_K_plus(double t, double x, double t_prime, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "kernel_K_plus";
    validate(consts, op);
    require_finite(t, op);
    require_finite(x, op);
    require_finite(t_prime, op);
    if (x < 0.0)
        fail(ErrorKind::domain, std::string(op), "kernel defined for x >= 0");
    const double tau = t - t_prime;
    if (tau < 0.0)
        return {0.0, 0.0};
    if (tau == 0.0)
        fail(ErrorKind::singular_kernel, std::string(op),
             x > 0.0 ? "kernel diverges at t = t'" : "kernel reduces to delta(t - t') at x = 0");
    const double modulus = std::sqrt(consts.mass / (consts.planck() * tau * tau * tau)) * x;
    return modulus * unit_phase(-0.25 * std::numbers::pi + consts.mass * x * x / (2.0 * consts.hbar * tau));
}

Complex reconstruct_time_domain(const Signal& signal, double x, double t, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "reconstruct_time_domain";
    validate(consts, op);
    validate(signal.tgrid, op);
    require_finite(x, op);
    require_finite(t, op);
    if (x < 0.0)
        fail(ErrorKind::domain, std::string(op), "the source solution holds only for x >= 0");
    if (signal.tgrid.t0 != 0.0 || signal.values.size() != signal.tgrid.samples())
        fail(ErrorKind::configuration, std::string(op), "signal must start at t0 = 0 and match its time grid");
    const double dt = signal.tgrid.dt;
    const double t_end = signal.tgrid.end();
    if (t > t_end * (1.0 + 1e-12))
        fail(ErrorKind::insufficient_record, std::string(op), "time lies beyond the recorded signal");
    if (t <= 0.0)
        return {0.0, 0.0};
    if (x == 0.0)
        return signal.at(t);

    const double beta = consts.mass * x * x / (2.0 * consts.hbar);
    const Complex c = std::polar(std::sqrt(consts.mass / consts.planck()) * x, -0.25 * std::numbers::pi);
    const auto& psi = signal.values;
    auto full = static_cast<std::size_t>(std::floor(t / dt * (1.0 + 1e-14)));
    full = std::min(full, signal.tgrid.n_steps);

    Complex sum{0.0, 0.0};
    double tau_hi = t;
    Complex m0_hi = shutter_moment0(tau_hi, beta);
    Complex m1_hi = shutter_moment1(tau_hi, beta, m0_hi);
    auto panel = [&](Complex left, Complex slope, double tau_lo) {
        const Complex m0_lo = shutter_moment0(tau_lo, beta);
        const Complex m1_lo = shutter_moment1(tau_lo, beta, m0_lo);
        const Complex M0 = c * (m0_hi - m0_lo);
        const Complex M1 = c * (m1_hi - m1_lo);
        sum += M0 * left + slope * (tau_hi * M0 - M1);
        tau_hi = tau_lo;
        m0_hi = m0_lo;
        m1_hi = m1_lo;
    };
    for (std::size_t j = 0; j < full; ++j)
        panel(psi[j], (psi[j + 1] - psi[j]) / dt, std::max(0.0, t - signal.tgrid.time(j + 1)));
    if (tau_hi > 0.0) {
        // extrapolate from the past so no sample later than t is touched
        const Complex slope = full > 0 ? (psi[full] - psi[full - 1]) / dt : Complex{0.0, 0.0};
        panel(psi[full], slope, 0.0);
    }
    return sum;
}

Complex momentum_split(const MomentumAmplitude& amp, MomentumSign sign, double x, double t,
                       const SplitQuadrature& quad)
{
    constexpr std::string_view op = "momentum_split";
    require_finite(x, op);
    require_finite(t, op);
    const PhysicalConstants& c = amp.constants();
    const double s = sign == MomentumSign::positive ? 1.0 : -1.0;
    auto integrand = [&](double p, Complex value) {
        return unit_phase(p * x / c.hbar - p * p * t / (2.0 * c.mass * c.hbar)) * value;
    };

    Complex sum{0.0, 0.0};
    if (!amp.is_analytic()) {
        const auto momenta = amp.momenta();
        const auto values = amp.values();
        for (std::size_t k = 0; k < momenta.size(); ++k) {
            const double weight = amp.half_line_weight(k, sign == MomentumSign::positive ? 1 : -1);
            if (weight == 0.0)
                continue;
            const double p = momenta[k];
            sum += weight * integrand(p, values[k]);
        }
        return sum * amp.momentum_spacing() / std::sqrt(c.planck());
    }

    if (!(quad.p_max > 0.0) || quad.order < 2 || !(quad.max_panel > 0.0))
        fail(ErrorKind::configuration, std::string(op), "invalid quadrature settings");
    const double omega = (std::abs(x) + state_extent(amp.state()) + quad.p_max * std::abs(t) / c.mass) / c.hbar;
    const double width = std::min(quad.max_panel, 1.0 / std::max(omega, 1e-300));
    const auto panels = static_cast<std::size_t>(std::ceil(quad.p_max / width));
    const double h = quad.p_max / static_cast<double>(panels);
    const QuadratureRule& rule = gauss_legendre(quad.order);
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = h * static_cast<double>(i);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double p = s * (lo + 0.5 * h * (1.0 + rule.nodes[q]));
            sum += 0.5 * h * rule.weights[q] * integrand(p, amp(p));
        }
    }
    return sum / std::sqrt(c.planck());
}

WaveField momentum_split(const WaveField& field, MomentumSign sign, double t, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "momentum_split";
    validate(field.grid, op);
    validate(consts, op);
    require_finite(t, op);
    const std::size_t n = field.grid.n;
    if (field.values.size() != n)
        fail(ErrorKind::configuration, std::string(op), "field length does not match its grid");
    WaveField out = field;
    const Fft fft(n);
    fft.forward(out.values);
    const double inv_n = 1.0 / static_cast<double>(n);
    const long nyquist = -static_cast<long>(n / 2);
    for (std::size_t k = 0; k < n; ++k) {
        const long bin = signed_bin(k, n);
        double weight = 0.0;
        if (bin == 0 || bin == nyquist)
            weight = 0.5;
        else if ((bin > 0) == (sign == MomentumSign::positive))
            weight = 1.0;
        const double p = field.grid.momentum(k, consts.hbar);
        out.values[k] *= weight * inv_n * unit_phase(-p * p * t / (2.0 * consts.mass * consts.hbar));
    }
    fft.backward(out.values);
    out.time = field.time + t;
    return out;
}

} // namespace sourcewave
