#pragma once

#include <stdexcept>
#include <string>

namespace tmm {

/// Invalid argument to a library operation (dimension mismatch, out-of-range value).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A parameter combination for which the requested quantity is undefined
/// (e.g. beta = 1 in the damping formula, or a vanishing initialization denominator).
struct SingularParameterError : std::domain_error {
  using std::domain_error::domain_error;
};

/// The operation needs an optional capability (Hessian product, known minimizer)
/// that the given cost does not provide.
struct CapabilityError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Nonfinite values encountered while stepping or integrating.
/// `where` is the iteration index (discrete) or time (continuous) of the last good sample.
struct NumericalFailure : std::runtime_error {
  NumericalFailure(const std::string& msg, double where_)
      : std::runtime_error(msg), where(where_) {}
  double where;
};

/// Cost error grew past the divergence threshold during a run.
struct DivergenceError : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

/// Closed-form and numeric rate maximizations disagree beyond tolerance;
/// raised instead of silently preferring one of the two.
struct CertificateInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tmm
