#include "sourcewave/signal.hpp"

#include "sourcewave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sourcewave {

TimeGrid TimeGrid::make(double t0, double dt, std::size_t n_steps)
{
    TimeGrid tgrid{t0, dt, n_steps};
    validate(tgrid, "TimeGrid::make");
    return tgrid;
}

TimeGrid TimeGrid::spanning(double t0, double t_end, double dt_max)
{
    if (!(t_end > t0) || !(dt_max > 0.0))
        fail(ErrorKind::configuration, "TimeGrid::spanning", "need t_end > t0 and dt_max > 0");
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt_max - 1e-9));
    return make(t0, (t_end - t0) / static_cast<double>(steps), steps);
}

void validate(const TimeGrid& tgrid, std::string_view operation)
{
    if (!std::isfinite(tgrid.t0) || !(tgrid.dt > 0.0) || !std::isfinite(tgrid.dt))
        fail(ErrorKind::configuration, std::string(operation), "time grid needs finite t0 and dt > 0");
    if (tgrid.n_steps < 1)
        fail(ErrorKind::configuration, std::string(operation), "time grid needs at least one step");
}

double Signal::max_abs() const
{
    double peak = 0.0;
    for (const Complex& v : values)
        peak = std::max(peak, std::abs(v));
    return peak;
}

Complex Signal::at(double t) const
{
    if (t < tgrid.t0)
        return {0.0, 0.0};
    const double s = (t - tgrid.t0) / tgrid.dt;
    const double last = static_cast<double>(values.size() - 1);
    if (s > last * (1.0 + 1e-12))
        fail(ErrorKind::insufficient_record, "Signal::at", "time lies beyond the recorded signal");
    const auto k = static_cast<std::size_t>(std::min(std::floor(s), last - 1.0));
    const double frac = std::clamp(s - static_cast<double>(k), 0.0, 1.0);
    return values[k] + frac * (values[k + 1] - values[k]);
}

Signal monochromatic_signal(double omega0, double eta, const TimeGrid& tgrid)
{
    validate(tgrid, "monochromatic_signal");
    if (tgrid.t0 != 0.0)
        fail(ErrorKind::configuration, "monochromatic_signal", "signals start at t0 = 0");
    Signal signal{0.0, tgrid, std::vector<Complex>(tgrid.samples()), true};
    for (std::size_t k = 0; k < signal.values.size(); ++k) {
        const double t = tgrid.time(k);
        signal.values[k] = std::exp(Complex{-eta * t, -omega0 * t});
    }
    return signal;
}

} // namespace sourcewave
