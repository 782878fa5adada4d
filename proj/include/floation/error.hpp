#pragma once

#include <stdexcept>
#include <string>

namespace flo {

// Error families. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
    Usage = 1,
    Parse = 2,
    Invalid = 3,  // structural invariant of an input violated
    Order = 4,    // order oracle refused (rank mismatch, edge equivalent to unit, ...)
    Trace = 5,    // leaf tracing / geometry failures
    Theorem = 6,  // a proven equivalence failed at runtime: implementation fault
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), code_(code), kind_(std::move(kind)) {}

    ErrorCode code() const { return code_; }
    // Stable short identifier, e.g. "EdgeEquivalentToUnit".
    const std::string& kind() const { return kind_; }

private:
    ErrorCode code_;
    std::string kind_;
};

}  // namespace flo
