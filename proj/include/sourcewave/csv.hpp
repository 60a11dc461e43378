#pragma once

#include "sourcewave/signal.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sourcewave {

struct EnergySpectrum;

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

/// Header line followed by one row per index; all columns must have equal length.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns);

/// Columns t, re, im.
void write_signal_csv(std::ostream& out, const Signal& signal);
/// Columns E, re, im; the sampled part without any tail completion.
void write_spectrum_csv(std::ostream& out, const EnergySpectrum& spectrum);

} // namespace sourcewave
