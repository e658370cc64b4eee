#include "hcconf/error.hpp"

namespace hcconf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::NotAnEllipse: return "NotAnEllipse";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::AllFitsFailed: return "AllFitsFailed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownScore: return "UnknownScore";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::InvalidMaskValue: return "InvalidMaskValue";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadNumber: return "BadNumber";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
  }
  return "Unknown";
}

}  // namespace hcconf
