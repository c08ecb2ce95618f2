#include "qpsl/errors.hpp"

namespace qpsl {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NotInUnitInterval: return "NotInUnitInterval";
    case ErrorKind::ExpansionTooShallow: return "ExpansionTooShallow";
    case ErrorKind::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorKind::DegenerateExponent: return "DegenerateExponent";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SingularConjugator: return "SingularConjugator";
    case ErrorKind::NotUnipotent: return "NotUnipotent";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::SmallDivisor: return "SmallDivisor";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::StateInvalid: return "StateInvalid";
    case ErrorKind::TargetNotLocked: return "TargetNotLocked";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

} // namespace qpsl
