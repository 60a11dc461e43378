#include "sourcewave/csv.hpp"

#include "sourcewave/errors.hpp"
#include "sourcewave/source.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace sourcewave {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return {buffer.data(), result.ptr};
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size())
        fail(ErrorKind::configuration, "write_csv", "header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& column : columns) {
        if (column.size() != rows)
            fail(ErrorKind::configuration, "write_csv", "columns have different lengths");
    }
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << format_number(columns[c][r]);
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorKind::configuration, "write_csv_file", "cannot open " + path);
    write_csv(out, header, columns);
}

void write_signal_csv(std::ostream& out, const Signal& signal)
{
    std::vector<std::vector<double>> cols(3);
    for (std::size_t k = 0; k < signal.values.size(); ++k) {
        cols[0].push_back(signal.tgrid.time(k));
        cols[1].push_back(signal.values[k].real());
        cols[2].push_back(signal.values[k].imag());
    }
    write_csv(out, {"t", "re", "im"}, cols);
}

void write_spectrum_csv(std::ostream& out, const EnergySpectrum& spectrum)
{
    std::vector<std::vector<double>> cols(3);
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        cols[0].push_back(spectrum.energies[k]);
        cols[1].push_back(spectrum.values[k].real());
        cols[2].push_back(spectrum.values[k].imag());
    }
    write_csv(out, {"E", "re", "im"}, cols);
}

} // namespace sourcewave
