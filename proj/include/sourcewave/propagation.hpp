#pragma once

#include "sourcewave/errors.hpp"
#include "sourcewave/signal.hpp"
#include "sourcewave/states.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace sourcewave {

struct FreePotential {};

/// V(x) = V0 for x >= 0, zero otherwise.
struct StepPotential {
    double V0 = 5.0;
};

/// V(x) = V0 on [c, d], zero otherwise; c <= d <= 0.
struct SquareBarrierPotential {
    double V0 = 1.0;
    double c = -1.0;
    double d = 0.0;
};

/// Values at the nodes of the grid the evolution runs on.
struct SampledPotential {
    std::vector<double> values;
};

using PotentialProfile = std::variant<FreePotential, StepPotential, SquareBarrierPotential, SampledPotential>;

void validate(const PotentialProfile& potential, std::string_view operation);
bool is_free(const PotentialProfile& potential) noexcept;
std::vector<double> sample_potential(const PotentialProfile& potential, const Grid1D& grid);

/// Density watch near the periodic boundaries.
struct EdgeMonitor {
    double threshold = 1e-8; // relative to the peak density
    double fraction = 0.05;  // width of each watched strip, relative to the grid length
    bool enabled = true;
};

/// Largest density within the watched strips divided by the peak density.
double edge_ratio(const WaveField& field, double fraction = 0.05);
void check_edges(const WaveField& field, const EdgeMonitor& monitor, std::string_view operation);

struct EvolutionOptions {
    EdgeMonitor edges;
    std::size_t edge_check_interval = 10;
    std::size_t norm_interval = 1;
    bool record_probe = true;
    double probe_x = 0.0;
    std::vector<double> snapshot_times;
};

struct NormSample {
    double time = 0.0;
    double norm = 0.0;
};

struct EvolutionRecord {
    std::vector<WaveField> snapshots;
    std::optional<Signal> probe;
    std::vector<NormSample> norm_history;
    bool overflowed = false;

    double norm_drift() const;
    const WaveField& snapshot_at(double time) const;
};

/// Domain-overflow error that keeps whatever the run recorded before aborting.
class EvolutionOverflow : public Error {
public:
    EvolutionOverflow(std::string operation, const std::string& message, EvolutionRecord partial);
    const EvolutionRecord& partial() const noexcept { return partial_; }

private:
    EvolutionRecord partial_;
};

/// <x|U(t, t')|x'> for free motion; the root carries phase exp(-i pi/4) for t > t'.
Complex free_propagator_kernel(double x, double x_prime, double t, double t_prime,
                               const PhysicalConstants& consts = {});

/// Exact free evolution of the (boosted) well ground state through the
/// w-function form; boosts enter by a Galilean transformation.
Complex evolve_free_moshinsky(const WellStateSpec& spec, double x, double t,
                              const PhysicalConstants& consts = {});
WaveField evolve_free_moshinsky(const WellStateSpec& spec, const Grid1D& grid, double t,
                                const PhysicalConstants& consts = {});

/// Probe-only record of the exact free solution at `probe_x` on tgrid.
EvolutionRecord moshinsky_probe_record(const WellStateSpec& spec, const TimeGrid& tgrid, double probe_x = 0.0,
                                       const PhysicalConstants& consts = {});

/// Free evolution over a duration t by the exact phase exp(-i p^2 t / 2m hbar)
/// on the grid's momentum lattice.
WaveField evolve_free_spectral(WaveField field, double t, const PhysicalConstants& consts = {},
                               const EdgeMonitor& monitor = {});

/// Strang splitting: half potential kick, exact kinetic step in momentum
/// space, half potential kick. The free case skips the position-space
/// round trip since every kick is the identity.
EvolutionRecord evolve_split_operator(WaveField field, const PotentialProfile& potential, const TimeGrid& tgrid,
                                      const PhysicalConstants& consts = {}, const EvolutionOptions& options = {});

} // namespace sourcewave
