#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcconf {

enum class ErrorCode {
  InvalidArgument,
  // ellipse geometry
  TooFewPoints,
  DegenerateConfiguration,
  NotAnEllipse,
  Singular,
  EmptyMask,
  // biometry / scores
  NoConvergence,
  EmptyList,
  InsufficientSamples,
  AllFitsFailed,
  DimensionMismatch,
  // metrics
  UnknownScore,
  EmptyCohort,
  // files
  IoError,
  MalformedHeader,
  InvalidMaskValue,
  UnsupportedMaxval,
  MissingColumn,
  BadNumber,
  EmptyManifest,
};

/// Stable tag used in CSV error columns and CLI messages.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hcconf
