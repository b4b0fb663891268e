#include "stylebasis/error.hpp"

namespace stylebasis {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::InvalidTensor: return "InvalidTensor";
    case ErrorKind::NonNegligibleImaginary: return "NonNegligibleImaginary";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::UnknownStyleId: return "UnknownStyleId";
    case ErrorKind::MethodMismatch: return "MethodMismatch";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::UnsupportedSelector: return "UnsupportedSelector";
    case ErrorKind::InvalidControlSpec: return "InvalidControlSpec";
    case ErrorKind::UnknownLayer: return "UnknownLayer";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::BadWeightsFile: return "BadWeightsFile";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonNegligibleImaginary:
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::DegenerateInput:
    case ErrorKind::NonFiniteLoss:
      return ErrorCategory::Numeric;
    case ErrorKind::InvalidControlSpec:
    case ErrorKind::UnsupportedSelector:
    case ErrorKind::InvalidArgument:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace stylebasis
