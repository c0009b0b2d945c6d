#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace defjump {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Error names surfaced to callers and to CLI reports.
enum class ErrorKind {
  SquareNonzero,
  NonHermitianMetric,
  ShapeMismatch,
  DegreeOutOfRange,
  AntisymmetryViolation,
  LeibnizViolation,
  JacobiViolation,
  NotHarmonic,
  CompatibilityViolation,
  DegreeMismatch,
  IntegrabilityFailure,
  OrderExceedsTruncation,
  NotClosed,
  InconsistentSamples,
  NotSquareZero,
  ParseError,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace defjump
