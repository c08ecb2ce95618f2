#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpsl {

// Every failure raised by the library carries one of these kinds so that
// callers (and the CLI's machine-readable error stream) can branch on it.
enum class ErrorKind {
    PrecisionExhausted,
    NotInUnitInterval,
    ExpansionTooShallow,
    ScheduleTooShort,
    DegenerateExponent,
    Overflow,
    DomainMismatch,
    DegreeOverflow,
    NonConvergence,
    SingularConjugator,
    NotUnipotent,
    NotElliptic,
    SmallDivisor,
    NewtonDiverged,
    StateInvalid,
    TargetNotLocked,
    InvalidArgument,
    ConfigInvalid,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

} // namespace qpsl
