#include "defjump/types.hpp"

namespace defjump {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SquareNonzero: return "SquareNonzero";
    case ErrorKind::NonHermitianMetric: return "NonHermitianMetric";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorKind::LeibnizViolation: return "LeibnizViolation";
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::NotHarmonic: return "NotHarmonic";
    case ErrorKind::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::IntegrabilityFailure: return "IntegrabilityFailure";
    case ErrorKind::OrderExceedsTruncation: return "OrderExceedsTruncation";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::InconsistentSamples: return "InconsistentSamples";
    case ErrorKind::NotSquareZero: return "NotSquareZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace defjump
