#pragma once

#include "sourcewave/numerics.hpp"

#include <cstddef>
#include <vector>

namespace sourcewave {

/// Uniform time axis t_k = t0 + k dt, k = 0..n_steps.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    std::size_t n_steps = 1;

    static TimeGrid make(double t0, double dt, std::size_t n_steps);
    /// Grid from t0 to t_end with the step shrunk so the end lands on a node.
    static TimeGrid spanning(double t0, double t_end, double dt_max);

    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double end() const noexcept { return time(n_steps); }
    std::size_t samples() const noexcept { return n_steps + 1; }
};

void validate(const TimeGrid& tgrid, std::string_view operation);

/// Wave function at a fixed probe point, values[k] at tgrid.time(k).
/// Exposed gated: the wave is taken as zero before t0 = 0.
struct Signal {
    double probe_x = 0.0;
    TimeGrid tgrid;
    std::vector<Complex> values;
    bool gated = true;

    double record_length() const noexcept { return tgrid.end() - tgrid.t0; }
    double max_abs() const;
    /// Linear interpolation; zero before t0, insufficient-record error past the end.
    Complex at(double t) const;
};

/// exp(-i omega0 t - eta t) Theta(t) sampled on [0, T].
Signal monochromatic_signal(double omega0, double eta, const TimeGrid& tgrid);

} // namespace sourcewave
