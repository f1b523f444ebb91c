#pragma once

#include <stdexcept>
#include <string>

namespace morphkit {

// Error taxonomy. Exit-code buckets: usage/config -> 1, data -> 2, numerical -> 3.
enum class ErrorCode {
  invalid_argument,
  config_out_of_range,
  dims_exceed_model,

  io_error,
  parse_error,
  no_contour,
  open_contour_only,
  degenerate_split,
  too_few_points,
  mismatched_sizes,
  degenerate_shape,
  insufficient_samples,
  dimension_mismatch,
  length_mismatch,
  degenerate_curve,
  config_mismatch,
  empty_train,
  index_out_of_range,
  class_too_small,
  unknown_label,

  no_convergence,
  non_finite_energy,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config_out_of_range: return "ConfigOutOfRange";
    case ErrorCode::dims_exceed_model: return "DimsExceedModel";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::no_contour: return "NoContour";
    case ErrorCode::open_contour_only: return "OpenContourOnly";
    case ErrorCode::degenerate_split: return "DegenerateSplit";
    case ErrorCode::too_few_points: return "TooFewPoints";
    case ErrorCode::mismatched_sizes: return "MismatchedSizes";
    case ErrorCode::degenerate_shape: return "DegenerateShape";
    case ErrorCode::insufficient_samples: return "InsufficientSamples";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::degenerate_curve: return "DegenerateCurve";
    case ErrorCode::config_mismatch: return "ConfigMismatch";
    case ErrorCode::empty_train: return "EmptyTrain";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::class_too_small: return "ClassTooSmall";
    case ErrorCode::unknown_label: return "UnknownLabel";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::non_finite_energy: return "NonFiniteEnergy";
  }
  return "Unknown";
}

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument:
    case ErrorCode::config_out_of_range:
    case ErrorCode::dims_exceed_model:
      return 1;
    case ErrorCode::no_convergence:
    case ErrorCode::non_finite_energy:
      return 3;
    default:
      return 2;
  }
}

class MorphError : public std::runtime_error {
 public:
  MorphError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw MorphError(code, msg);
}

}  // namespace morphkit
