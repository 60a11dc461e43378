#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sourcewave {

enum class ErrorKind {
    domain,              // argument outside the region where the formula holds
    branch,              // argument on a branch cut or at a branch point
    geometry,            // state or potential does not fit the grid
    domain_overflow,     // wave reached the grid edges during evolution
    singular_kernel,     // kernel evaluated at coincident times
    configuration,       // missing probe, malformed scenario, inconsistent grids
    insufficient_record, // requested time lies beyond the recorded signal
    pole,                // denominator of an amplitude vanished
    not_supported,       // valid physics the library deliberately does not handle
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Error raised by every public operation; carries the failing operation name
/// so the command line front end can report it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string operation, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    ErrorKind kind_;
    std::string operation_;
};

[[noreturn]] void fail(ErrorKind kind, std::string operation, const std::string& message);

} // namespace sourcewave
