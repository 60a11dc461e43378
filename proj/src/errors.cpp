#include "sourcewave/errors.hpp"

namespace sourcewave {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::branch: return "branch error";
    case ErrorKind::geometry: return "geometry error";
    case ErrorKind::domain_overflow: return "domain-overflow error";
    case ErrorKind::singular_kernel: return "singular-kernel error";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::insufficient_record: return "insufficient-record error";
    case ErrorKind::pole: return "pole error";
    case ErrorKind::not_supported: return "not-supported error";
    }
    return "error";
}

Error::Error(ErrorKind kind, std::string operation, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " in " + operation + ": " + message),
      kind_(kind), operation_(std::move(operation))
{
}

void fail(ErrorKind kind, std::string operation, const std::string& message)
{
    throw Error(kind, std::move(operation), message);
}

} // namespace sourcewave
