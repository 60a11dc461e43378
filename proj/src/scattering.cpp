#include "sourcewave/scattering.hpp"

#include "sourcewave/errors.hpp"

#include <cmath>
#include <string>

namespace sourcewave {

namespace {

Complex checked_ratio(Complex num, Complex den, std::string_view op)
{
    if (den == Complex{0.0, 0.0})
        fail(ErrorKind::pole, std::string(op), "amplitude denominator vanishes");
    const Complex value = num / den;
    require_finite(value, op);
    return value;
}

// cos(kappa w) and sin(kappa w)/kappa from kappa^2
std::pair<Complex, Complex> interior_solutions(Complex kappa2, double w)
{
    const Complex kappa = std::sqrt(kappa2);
    const Complex z = kappa * w;
    if (std::abs(z) < 1e-3) {
        const Complex z2 = z * z;
        return {1.0 - z2 / 2.0 + z2 * z2 / 24.0, w * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)};
    }
    return {std::cos(z), std::sin(z) / kappa};
}

double integrate_density(const MomentumAmplitude& amp, double lo, double hi, double panel)
{
    const QuadratureRule& rule = gauss_legendre(16);
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / panel));
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double left = lo + h * static_cast<double>(i);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            sum += 0.5 * h * rule.weights[q] * std::norm(amp(left + 0.5 * h * (1.0 + rule.nodes[q])));
    }
    return sum;
}

} // namespace

double StepSpec::p0(double mass) const noexcept { return std::sqrt(2.0 * mass * V0); }

void validate(const StepSpec& spec, std::string_view operation)
{
    if (!(spec.V0 >= 0.0) || !std::isfinite(spec.V0))
        fail(ErrorKind::domain, std::string(operation), "step height must be finite and >= 0");
}

void validate(const BarrierSpec& spec, std::string_view operation)
{
    if (!std::isfinite(spec.V0) || !std::isfinite(spec.c) || !std::isfinite(spec.d))
        fail(ErrorKind::domain, std::string(operation), "barrier parameters must be finite");
    if (!(spec.c <= spec.d) || spec.d > 0.0)
        fail(ErrorKind::geometry, std::string(operation), "barrier support needs c <= d <= 0");
}

Complex transmission_step(Complex p, const StepSpec& spec, const PhysicalConstants& consts)
{
    validate(spec, "transmission_step");
    const Complex q = q_of_p(p, spec.p0(consts.mass));
    return checked_ratio(2.0 * p, p + q, "transmission_step");
}

Complex reflection_step(Complex p, const StepSpec& spec, const PhysicalConstants& consts)
{
    validate(spec, "reflection_step");
    const Complex q = q_of_p(p, spec.p0(consts.mass));
    return checked_ratio(p - q, p + q, "reflection_step");
}

Complex transmission_square_barrier(Complex p, const BarrierSpec& spec, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "transmission_square_barrier";
    validate(spec, op);
    validate(consts, op);
    require_finite(p, op);
    if (p == Complex{0.0, 0.0})
        return spec.V0 == 0.0 || spec.width() == 0.0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    const double w = spec.width();
    const Complex k = p / consts.hbar;
    const Complex kappa2 = k * k - 2.0 * consts.mass * spec.V0 / (consts.hbar * consts.hbar);
    const auto [C, S] = interior_solutions(kappa2, w);
    return checked_ratio(std::exp(-I * k * w), C - I * (k * k + kappa2) * S / (2.0 * k), op);
}

Complex reflection_square_barrier(Complex p, const BarrierSpec& spec, const PhysicalConstants& consts)
{
    constexpr std::string_view op = "reflection_square_barrier";
    validate(spec, op);
    validate(consts, op);
    require_finite(p, op);
    if (p == Complex{0.0, 0.0})
        return spec.V0 == 0.0 || spec.width() == 0.0 ? Complex{0.0, 0.0} : Complex{-1.0, 0.0};
    const double w = spec.width();
    const Complex k = p / consts.hbar;
    const Complex kappa2 = k * k - 2.0 * consts.mass * spec.V0 / (consts.hbar * consts.hbar);
    const auto [C, S] = interior_solutions(kappa2, w);
    return std::exp(2.0 * I * k * spec.c) *
           checked_ratio((k * k - kappa2) * S, 2.0 * I * k * C + (k * k + kappa2) * S, op);
}

Complex relevel_to_upper(Complex value, double t, const StepSpec& spec, const PhysicalConstants& consts)
{
    return value * std::polar(1.0, spec.V0 * t / consts.hbar);
}

Signal relevel_to_upper(const Signal& signal, const StepSpec& spec, const PhysicalConstants& consts)
{
    validate(spec, "relevel_to_upper");
    Signal out = signal;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = relevel_to_upper(out.values[k], out.tgrid.time(k), spec, consts);
    return out;
}

Complex step_relation_rhs(const MomentumAmplitude& amp, double energy_upper, const StepSpec& spec)
{
    constexpr std::string_view op = "step_relation_rhs";
    validate(spec, op);
    require_finite(energy_upper, op);
    const PhysicalConstants& c = amp.constants();
    const double energy = energy_upper + spec.V0;
    if (energy == 0.0)
        fail(ErrorKind::branch, std::string(op), "E' = -V0 is the branch point of p");
    const Complex p = p_plus(energy, c.mass);
    return c.mass / p * transmission_step(p, spec, c) * amp(p);
}

Complex barrier_relation_rhs(const MomentumAmplitude& amp, double energy, const BarrierSpec& spec)
{
    constexpr std::string_view op = "barrier_relation_rhs";
    validate(spec, op);
    require_finite(energy, op);
    if (spec.V0 < 0.0)
        fail(ErrorKind::not_supported, std::string(op), "attractive wells may carry bound-state poles");
    if (energy == 0.0)
        fail(ErrorKind::branch, std::string(op), "E = 0 is the branch point of p_+");
    const PhysicalConstants& c = amp.constants();
    const Complex p = p_plus(energy, c.mass);
    return c.mass / p * transmission_square_barrier(p, spec, c) * amp(p);
}

double arrival_probability(const MomentumAmplitude& amp)
{
    if (!amp.is_analytic()) {
        double sum = 0.0;
        const auto momenta = amp.momenta();
        const auto values = amp.values();
        for (std::size_t k = 0; k < momenta.size(); ++k)
            sum += amp.half_line_weight(k, 1) * std::norm(values[k]);
        return sum * amp.momentum_spacing();
    }
    const double centre = std::visit([](const auto& s) { return s.p_avg; }, amp.state());
    const double cutoff = std::abs(centre) + 200.0 * amp.constants().hbar;
    double sum = integrate_density(amp, 0.0, cutoff, 0.05);
    // tail by p = cutoff / u
    const QuadratureRule& rule = gauss_legendre(16);
    constexpr std::size_t tail_panels = 400;
    const double h = 1.0 / tail_panels;
    for (std::size_t i = 0; i < tail_panels; ++i) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double u = h * (static_cast<double>(i) + 0.5 * (1.0 + rule.nodes[q]));
            sum += 0.5 * h * rule.weights[q] * std::norm(amp(cutoff / u)) * cutoff / (u * u);
        }
    }
    return sum;
}

double right_norm(const WaveField& field, double X)
{
    require_finite(X, "right_norm");
    return norm_beyond(field, X);
}

AsymptoticRightNorm asymptotic_right_norm(const WaveField& initial, double X, const PhysicalConstants& consts,
                                          const AsymptoticOptions& options)
{
    constexpr std::string_view op = "asymptotic_right_norm";
    if (!(options.interval > 0.0) || !(options.tolerance > 0.0) || !(options.t_max > options.interval))
        fail(ErrorKind::configuration, std::string(op), "invalid stopping settings");
    AsymptoticRightNorm out;
    out.history.push_back({initial.time, right_norm(initial, X)});
    for (double t = options.interval; t <= options.t_max + 1e-9; t += options.interval) {
        const WaveField field = evolve_free_spectral(initial, t, consts, options.edges);
        out.history.push_back({field.time, right_norm(field, X)});
        const double change = std::abs(out.history.back().right_norm - out.history[out.history.size() - 2].right_norm);
        out.time = field.time;
        out.value = out.history.back().right_norm;
        if (change < options.tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

Complex energy_overlap(const EnergySpectrum& spectrum, double energy, const PhysicalConstants& consts)
{
    require_finite(energy, "energy_overlap");
    if (energy == 0.0)
        fail(ErrorKind::branch, "energy_overlap", "E = 0 is the branch point of the fourth root");
    return spectrum.at(energy) * root_lower_cut(2.0 * energy / consts.mass, 0.25, "energy_overlap");
}

double energy_side_arrival(const EnergySpectrum& spectrum, const PhysicalConstants& consts)
{
    const std::size_t m = spectrum.energies.size();
    const double dE = spectrum.energy_spacing();
    constexpr std::size_t core = 8;
    const std::size_t zero = m / 2;
    auto density = [&](double e, Complex chi) { return std::norm(chi) * std::sqrt(2.0 * e / consts.mass); };
    double sum = 0.0;
    for (std::size_t i = zero + core; i < m; ++i) {
        const double weight = (i == zero + core || i + 1 == m) ? 0.5 : 1.0;
        sum += weight * density(spectrum.energies[i], spectrum.value(i));
    }
    sum *= dE;
    // E = u^2 near the threshold
    const QuadratureRule& rule = gauss_legendre(40);
    const double u_max = std::sqrt(static_cast<double>(core) * dE);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = 0.5 * u_max * (1.0 + rule.nodes[q]);
        sum += 0.5 * u_max * rule.weights[q] * 2.0 * u * density(u * u, spectrum.at(u * u));
    }
    return sum;
}

double energy_overlap_total(const EnergySpectrum& spectrum, const PhysicalConstants& consts)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < spectrum.energies.size(); ++i)
        sum += std::norm(spectrum.values[i]) * std::sqrt(2.0 * std::abs(spectrum.energies[i]) / consts.mass);
    return sum * spectrum.energy_spacing();
}

double negative_energy_fraction(const EnergySpectrum& spectrum)
{
    double negative = 0.0, total = 0.0;
    for (std::size_t i = 0; i < spectrum.energies.size(); ++i) {
        const double w = std::norm(spectrum.values[i]);
        total += w;
        if (spectrum.energies[i] < 0.0)
            negative += w;
    }
    return total > 0.0 ? negative / total : 0.0;
}

} // namespace sourcewave
