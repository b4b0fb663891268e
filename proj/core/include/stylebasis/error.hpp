#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stylebasis {

enum class ErrorKind {
  // tensor-core
  BadMagic,
  TruncatedPayload,
  UnsupportedDtype,
  IoFailure,
  UnsupportedFormat,
  DecodeError,
  RangeViolation,
  InvalidTensor,
  // decompositions
  NonNegligibleImaginary,
  IndexOutOfRange,
  ShapeMismatch,
  ConvergenceFailure,
  DegenerateInput,
  // control
  UnknownStyleId,
  MethodMismatch,
  BadWeights,
  UnsupportedSelector,
  InvalidControlSpec,
  // transfer
  UnknownLayer,
  NonFiniteLoss,
  BadWeightsFile,
  // atlas
  DisconnectedGraph,
  NotFound,
  InvalidArgument,
};

/// Coarse grouping used by the command-line tool for exit codes.
enum class ErrorCategory { Usage = 1, Data = 2, Numeric = 3 };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace stylebasis
